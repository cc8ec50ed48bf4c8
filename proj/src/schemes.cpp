#include "ifem/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace ifem {

const char* scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::coupled: return "coupled";
    case SchemeKind::dn: return "dn";
    case SchemeKind::rr: return "rr";
    case SchemeKind::irn: return "irn";
    case SchemeKind::irr: return "irr";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(const std::string& name) {
  if (name == "coupled") return SchemeKind::coupled;
  if (name == "dn") return SchemeKind::dn;
  if (name == "rr") return SchemeKind::rr;
  if (name == "irn") return SchemeKind::irn;
  if (name == "irr") return SchemeKind::irr;
  return std::nullopt;
}

namespace {

bool field_ok(const std::vector<double>& v, double threshold) {
  for (double x : v) {
    if (!std::isfinite(x) || std::fabs(x) > threshold) return false;
  }
  return true;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

struct SchemeRunner::Impl {
  struct SideData {
    SubdomainMesh mesh;
    CsrMatrix mass;
    CsrMatrix stiffness;
    std::vector<double> lumped;
    std::vector<char> dirichlet_mask;
    NodalField u;
    std::vector<double> u_prev;
    std::vector<double> u_prev2;
    double rho = 1.0;
  };

  SchemeConfig cfg;
  ManufacturedProblem prob;
  SideData s1, s2;
  InterfaceCoupling coupling;
  int n = 0;
  double dt = 0.0;
  int steps_total = 0;
  int step = 0;
  RunStatus status = RunStatus::running;

  std::unique_ptr<ConstrainedSystem> sys1, sys2;

  // Merged system for the coupled scheme.
  std::vector<int> map2;
  int merged_dim = 0;
  CsrMatrix merged_mass;
  std::vector<double> merged_lumped;
  std::unique_ptr<ConstrainedSystem> merged_sys;
  std::vector<double> merged_u;

  std::vector<std::vector<double>> trajectory1, trajectory2;
  std::ofstream trace_log;

  Impl(const SchemeConfig& config, const ManufacturedProblem& problem)
      : cfg(config), prob(problem) {
    n = cfg.subdivisions;
    dt = cfg.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be positive");
    steps_total = std::max(1, static_cast<int>(std::llround(cfg.final_time / dt)));
    if (cfg.kind == SchemeKind::rr && !(cfg.alpha1 > 0.0 && cfg.alpha2 > 0.0)) {
      throw std::invalid_argument("SchemeConfig: rr requires positive alpha1, alpha2");
    }

    init_side(s1, Side::omega1, cfg.rho1);
    init_side(s2, Side::omega2, cfg.rho2);
    coupling = build_interface_coupling(s1.mesh, s2.mesh, cfg.rho1, cfg.rho2);

    build_systems();

    if (cfg.store_trajectory) {
      trajectory1.push_back(s1.u.values);
      trajectory2.push_back(s2.u.values);
    }
    if (!cfg.trace_log_path.empty()) {
      trace_log.open(cfg.trace_log_path);
      trace_log << "step,t,max_u1,max_u2,interface_residual\n";
    }
  }

  void init_side(SideData& s, Side side, double rho) {
    s.mesh = build_subdomain_mesh(n, side);
    s.rho = rho;
    s.mass = assemble_mass(s.mesh, rho);
    s.stiffness = assemble_stiffness(s.mesh, {prob.beta, rho});
    s.lumped = assemble_lumped_mass(s.mesh, rho);
    s.dirichlet_mask.assign(s.mesh.node_count(), 0);
    for (int idx : s.mesh.dirichlet_nodes) s.dirichlet_mask[idx] = 1;

    s.u = interpolate_exact(s.mesh, 0.0);
    s.u.time_index = 0;
    s.u_prev = s.u.values;
    if (cfg.history_init == HistoryInit::exact_history) {
      s.u_prev2 = interpolate_exact(s.mesh, -dt).values;
    } else {
      s.u_prev2 = s.u_prev;  // backward difference starts at zero rate
    }
  }

  SideData& first() { return cfg.swap_roles ? s2 : s1; }
  SideData& second() { return cfg.swap_roles ? s1 : s2; }

  const std::vector<double>& weights_of(Side side) const {
    return side == Side::omega1 ? coupling.inertial_weights_1 : coupling.inertial_weights_2;
  }
  const std::vector<int>& interface_nodes_of(const SideData& s) const {
    return s.mesh.side == Side::omega1 ? coupling.nodes1 : coupling.nodes2;
  }

  void build_systems() {
    auto side_triplets = [&](const SideData& s, bool lumped_time) {
      std::vector<Triplet> t;
      if (lumped_time) {
        for (int i = 0; i < s.mesh.node_count(); ++i) {
          t.push_back({i, i, s.lumped[i] / dt});
        }
      } else {
        const auto& m = s.mass;
        for (int r = 0; r < m.rows(); ++r) {
          for (int k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) {
            t.push_back({r, m.col_indices()[k], m.values()[k] / dt});
          }
        }
      }
      const auto& kmat = s.stiffness;
      for (int r = 0; r < kmat.rows(); ++r) {
        for (int k = kmat.row_offsets()[r]; k < kmat.row_offsets()[r + 1]; ++k) {
          t.push_back({r, kmat.col_indices()[k], kmat.values()[k]});
        }
      }
      return t;
    };

    if (cfg.kind == SchemeKind::coupled) {
      build_merged(side_triplets);
      return;
    }

    SideData& a = first();
    SideData& b = second();
    std::vector<Triplet> ta = side_triplets(a, false);
    std::vector<Triplet> tb = side_triplets(b, false);
    std::vector<char> mask_a = a.dirichlet_mask;
    std::vector<char> mask_b = b.dirichlet_mask;

    switch (cfg.kind) {
      case SchemeKind::dn:
        for (int idx : interface_nodes_of(a)) mask_a[idx] = 1;
        break;
      case SchemeKind::rr: {
        const auto ga = gamma_mass_triplets(coupling, cfg.alpha1, interface_nodes_of(a));
        ta.insert(ta.end(), ga.begin(), ga.end());
        const auto gb = gamma_mass_triplets(coupling, cfg.alpha2, interface_nodes_of(b));
        tb.insert(tb.end(), gb.begin(), gb.end());
        break;
      }
      case SchemeKind::irn:
      case SchemeKind::irr: {
        const auto& wa = weights_of(b.mesh.side);  // opposite-side weights
        const auto& na = interface_nodes_of(a);
        for (int k = 1; k < n; ++k) {
          ta.push_back({na[k], na[k], wa[k] / dt});
        }
        if (cfg.kind == SchemeKind::irr) {
          const auto& wb = weights_of(a.mesh.side);
          const auto& nb = interface_nodes_of(b);
          for (int k = 1; k < n; ++k) {
            tb.push_back({nb[k], nb[k], wb[k] / dt});
          }
        }
        break;
      }
      default:
        break;
    }

    sys1 = std::make_unique<ConstrainedSystem>(a.mesh.node_count(), ta, mask_a);
    sys2 = std::make_unique<ConstrainedSystem>(b.mesh.node_count(), tb, mask_b);
  }

  template <class SideTriplets>
  void build_merged(const SideTriplets& side_triplets) {
    const int n1 = s1.mesh.node_count();
    map2.assign(s2.mesh.node_count(), -1);
    int next = n1;
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        const int idx = s2.mesh.node_index(i, j);
        map2[idx] = (i == 0) ? s1.mesh.node_index(n, j) : next++;
      }
    }
    // Cell centres of the second subdomain never lie on Gamma.
    for (int idx = (n + 1) * (n + 1); idx < s2.mesh.node_count(); ++idx) {
      map2[idx] = next++;
    }
    merged_dim = next;

    auto remap = [&](std::vector<Triplet> t, const std::vector<int>* map) {
      if (map) {
        for (auto& e : t) {
          e.row = (*map)[e.row];
          e.col = (*map)[e.col];
        }
      }
      return t;
    };

    std::vector<Triplet> sys = remap(side_triplets(s1, cfg.lumped_coupled), nullptr);
    {
      auto t2 = remap(side_triplets(s2, cfg.lumped_coupled), &map2);
      sys.insert(sys.end(), t2.begin(), t2.end());
    }

    std::vector<char> mask(merged_dim, 0);
    for (int idx : s1.mesh.dirichlet_nodes) mask[idx] = 1;
    for (int idx : s2.mesh.dirichlet_nodes) mask[map2[idx]] = 1;
    merged_sys = std::make_unique<ConstrainedSystem>(merged_dim, sys, mask);

    if (cfg.lumped_coupled) {
      merged_lumped.assign(merged_dim, 0.0);
      for (int i = 0; i < n1; ++i) merged_lumped[i] += s1.lumped[i];
      for (int i = 0; i < s2.mesh.node_count(); ++i) merged_lumped[map2[i]] += s2.lumped[i];
    } else {
      std::vector<Triplet> mt;
      auto add_mass = [&](const CsrMatrix& m, const std::vector<int>* map) {
        for (int r = 0; r < m.rows(); ++r) {
          for (int k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) {
            int rr = r, cc = m.col_indices()[k];
            if (map) {
              rr = (*map)[rr];
              cc = (*map)[cc];
            }
            mt.push_back({rr, cc, m.values()[k]});
          }
        }
      };
      add_mass(s1.mass, nullptr);
      add_mass(s2.mass, &map2);
      merged_mass = CsrMatrix::from_triplets(merged_dim, merged_dim, std::move(mt));
    }

    merged_u.assign(merged_dim, 0.0);
    for (int i = 0; i < n1; ++i) merged_u[i] = s1.u.values[i];
    for (int i = 0; i < s2.mesh.node_count(); ++i) merged_u[map2[i]] = s2.u.values[i];
  }

  std::vector<double> load_of(const SideData& s, double t) const {
    if (cfg.source == SourceMode::zero) {
      return std::vector<double>(s.mesh.node_count(), 0.0);
    }
    const Side side = s.mesh.side;
    const ManufacturedProblem& p = prob;
    return assemble_load(
        s.mesh, [side, &p](double x, double y, double tt) { return source_term(side, x, y, tt, p); },
        t);
  }

  std::vector<double> trace_prev(const SideData& s) const {
    const auto& nodes = s.mesh.side == Side::omega1 ? coupling.nodes1 : coupling.nodes2;
    std::vector<double> tr(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) tr[k] = s.u_prev[nodes[k]];
    return tr;
  }

  // Variationally consistent Neumann flux of the donor side: the residual of
  // its backward-Euler equation, restricted to the interface rows. For the
  // pair (u_new, u_old) at source time tau this is
  //   [M (u_new - u_old)/dt + K u_new - f(tau)]  at the interface nodes,
  // which is the discrete counterpart of the boundary term
  // (beta grad u . n, v)_Gamma left over after integration by parts.
  std::vector<double> residual_flux(const SideData& s, const std::vector<double>& u_new,
                                    const std::vector<double>& u_old, double tau) const {
    const auto& nodes = interface_nodes_of(s);
    std::vector<double> rate(u_new.size());
    for (std::size_t i = 0; i < u_new.size(); ++i) rate[i] = (u_new[i] - u_old[i]) / dt;
    const std::vector<double> mu = s.mass.multiply(rate);
    const std::vector<double> ku = s.stiffness.multiply(u_new);
    const std::vector<double> f = load_of(s, tau);
    std::vector<double> flux(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const int idx = nodes[k];
      flux[k] = mu[idx] + ku[idx] - f[idx];
    }
    return flux;
  }

  void step_coupled(double t) {
    std::vector<double> b(merged_dim, 0.0);
    if (cfg.lumped_coupled) {
      for (int i = 0; i < merged_dim; ++i) b[i] = merged_lumped[i] * merged_u[i] / dt;
    } else {
      b = merged_mass.multiply(merged_u);
      for (double& v : b) v /= dt;
    }
    const std::vector<double> f1 = load_of(s1, t);
    const std::vector<double> f2 = load_of(s2, t);
    for (int i = 0; i < s1.mesh.node_count(); ++i) b[i] += f1[i];
    for (int i = 0; i < s2.mesh.node_count(); ++i) b[map2[i]] += f2[i];

    const std::vector<double> zeros(merged_dim, 0.0);
    merged_u = merged_sys->solve(b, zeros, cfg.solver_tol, &merged_u);

    for (int i = 0; i < s1.mesh.node_count(); ++i) s1.u.values[i] = merged_u[i];
    for (int i = 0; i < s2.mesh.node_count(); ++i) s2.u.values[i] = merged_u[map2[i]];
  }

  void step_decoupled(double t) {
    SideData& a = first();
    SideData& b = second();
    const auto& na = interface_nodes_of(a);
    const auto& nb = interface_nodes_of(b);

    NodalField b_prev_field{b.u_prev, step - 1, b.mesh.side};
    const std::vector<double> trace_b_prev = trace_prev(b);

    // Step 1: solve the first subdomain.
    std::vector<double> rhs = a.mass.multiply(a.u_prev);
    for (double& v : rhs) v /= dt;
    {
      const std::vector<double> fa = load_of(a, t);
      for (int i = 0; i < a.mesh.node_count(); ++i) rhs[i] += fa[i];
    }
    std::vector<double> constrained(a.mesh.node_count(), 0.0);

    switch (cfg.kind) {
      case SchemeKind::dn:
        for (int k = 0; k <= n; ++k) constrained[na[k]] = trace_b_prev[k];
        break;
      case SchemeKind::rr: {
        const std::vector<double> robin = gamma_mass_apply(coupling, cfg.alpha1, trace_b_prev);
        const std::vector<double> flux =
            interface_flux_vector(b.mesh, b_prev_field, prob.beta, coupling);
        for (int k = 0; k <= n; ++k) rhs[na[k]] += robin[k] - flux[k];
        break;
      }
      case SchemeKind::irn:
      case SchemeKind::irr: {
        const auto& w = weights_of(b.mesh.side);
        const std::vector<double> flux = residual_flux(b, b.u_prev, b.u_prev2, t - dt);
        for (int k = 1; k < n; ++k) {
          const double rate_prev = (trace_b_prev[k] - b.u_prev2[nb[k]]) / dt;
          rhs[na[k]] += w[k] * (trace_b_prev[k] / dt + rate_prev);
        }
        for (int k = 0; k <= n; ++k) rhs[na[k]] -= flux[k];
        break;
      }
      default:
        break;
    }

    std::vector<double> ua = sys1->solve(rhs, constrained, cfg.solver_tol, &a.u_prev);

    // Step 2: solve the second subdomain with data from the fresh first-side
    // solution. The fresh flux is always extracted variationally.
    std::vector<double> rhs2 = b.mass.multiply(b.u_prev);
    for (double& v : rhs2) v /= dt;
    {
      const std::vector<double> fb = load_of(b, t);
      for (int i = 0; i < b.mesh.node_count(); ++i) rhs2[i] += fb[i];
    }
    const std::vector<double> flux_a = residual_flux(a, ua, a.u_prev, t);
    for (int k = 0; k <= n; ++k) rhs2[nb[k]] -= flux_a[k];

    if (cfg.kind == SchemeKind::rr) {
      std::vector<double> trace_a_new(n + 1);
      for (int k = 0; k <= n; ++k) trace_a_new[k] = ua[na[k]];
      const std::vector<double> robin = gamma_mass_apply(coupling, cfg.alpha2, trace_a_new);
      for (int k = 0; k <= n; ++k) rhs2[nb[k]] += robin[k];
    } else if (cfg.kind == SchemeKind::irr) {
      const auto& w = weights_of(a.mesh.side);
      for (int k = 1; k < n; ++k) {
        const double trace_a_prev = a.u_prev[na[k]];
        const double rate_new = (ua[na[k]] - trace_a_prev) / dt;
        rhs2[nb[k]] += w[k] * (trace_a_prev / dt + rate_new);
      }
    }

    const std::vector<double> zeros(b.mesh.node_count(), 0.0);
    std::vector<double> ub = sys2->solve(rhs2, zeros, cfg.solver_tol, &b.u_prev);

    a.u.values = std::move(ua);
    b.u.values = std::move(ub);
  }

  void shift_history(SideData& s) {
    s.u_prev2 = s.u_prev;
    s.u_prev = s.u.values;
    s.u.time_index = step;
  }

  void advance() {
    if (status != RunStatus::running || step >= steps_total) return;
    ++step;
    const double t = step * dt;

    if (cfg.kind == SchemeKind::coupled) {
      step_coupled(t);
    } else {
      step_decoupled(t);
    }

    if (!field_ok(s1.u.values, cfg.divergence_threshold) ||
        !field_ok(s2.u.values, cfg.divergence_threshold)) {
      status = RunStatus::diverged;
    }

    shift_history(s1);
    shift_history(s2);

    if (cfg.store_trajectory) {
      trajectory1.push_back(s1.u.values);
      trajectory2.push_back(s2.u.values);
    }
    if (trace_log.is_open()) {
      double iface_res = 0.0;
      for (int k = 0; k <= n; ++k) {
        iface_res = std::max(
            iface_res, std::fabs(s1.u.values[coupling.nodes1[k]] - s2.u.values[coupling.nodes2[k]]));
      }
      trace_log << step << ',' << t << ',' << max_abs(s1.u.values) << ','
                << max_abs(s2.u.values) << ',' << iface_res << '\n';
    }
  }
};

SchemeRunner::SchemeRunner(const SchemeConfig& config, const ManufacturedProblem& problem)
    : impl_(std::make_unique<Impl>(config, problem)) {}
SchemeRunner::~SchemeRunner() = default;
SchemeRunner::SchemeRunner(SchemeRunner&&) noexcept = default;
SchemeRunner& SchemeRunner::operator=(SchemeRunner&&) noexcept = default;

void SchemeRunner::advance() { impl_->advance(); }
bool SchemeRunner::done() const {
  return impl_->status != RunStatus::running || impl_->step >= impl_->steps_total;
}
RunStatus SchemeRunner::status() const { return impl_->status; }
int SchemeRunner::step() const { return impl_->step; }
int SchemeRunner::steps_total() const { return impl_->steps_total; }
const NodalField& SchemeRunner::u1() const { return impl_->s1.u; }
const NodalField& SchemeRunner::u2() const { return impl_->s2.u; }
const SubdomainMesh& SchemeRunner::mesh1() const { return impl_->s1.mesh; }
const SubdomainMesh& SchemeRunner::mesh2() const { return impl_->s2.mesh; }
const InterfaceCoupling& SchemeRunner::coupling() const { return impl_->coupling; }

const CsrMatrix& SchemeRunner::step1_matrix() const {
  return impl_->cfg.kind == SchemeKind::coupled ? impl_->merged_sys->reduced_matrix()
                                                : impl_->sys1->reduced_matrix();
}
const CsrMatrix& SchemeRunner::step2_matrix() const {
  if (impl_->cfg.kind == SchemeKind::coupled) {
    throw std::logic_error("step2_matrix: coupled scheme has a single system");
  }
  return impl_->sys2->reduced_matrix();
}

void SchemeRunner::scale_inertial_weights(double scale1, double scale2) {
  for (double& w : impl_->coupling.inertial_weights_1) w *= scale1;
  for (double& w : impl_->coupling.inertial_weights_2) w *= scale2;
  impl_->build_systems();
}

SimulationRun SchemeRunner::finish() {
  SimulationRun run;
  run.config = impl_->cfg;
  run.status = impl_->status == RunStatus::running && impl_->step >= impl_->steps_total
                   ? RunStatus::converged
                   : impl_->status;
  run.steps_completed = impl_->step;
  run.steps_total = impl_->steps_total;
  run.final_time = impl_->step * impl_->dt;
  run.u1 = impl_->s1.u;
  run.u2 = impl_->s2.u;
  run.trajectory1 = std::move(impl_->trajectory1);
  run.trajectory2 = std::move(impl_->trajectory2);
  return run;
}

SimulationRun run_simulation(const SchemeConfig& config, const ManufacturedProblem& problem) {
  SchemeRunner runner(config, problem);
  while (!runner.done()) runner.advance();
  return runner.finish();
}

double verify_inertial_identity(const SimulationRun& run, const ManufacturedProblem& problem) {
  if (run.trajectory1.empty()) {
    throw std::invalid_argument("verify_inertial_identity: run has no stored trajectory");
  }
  const SchemeConfig& cfg = run.config;
  const int n = cfg.subdivisions;
  const double dt = cfg.dt;

  const SubdomainMesh mesh1 = build_subdomain_mesh(n, Side::omega1);
  const SubdomainMesh mesh2 = build_subdomain_mesh(n, Side::omega2);
  const InterfaceCoupling coupling =
      build_interface_coupling(mesh1, mesh2, cfg.rho1, cfg.rho2);
  const CsrMatrix k1 = assemble_stiffness(mesh1, {problem.beta, cfg.rho1});
  const CsrMatrix k2 = assemble_stiffness(mesh2, {problem.beta, cfg.rho2});
  const std::vector<double> lumped1 = assemble_lumped_mass(mesh1, cfg.rho1);
  const std::vector<double> lumped2 = assemble_lumped_mass(mesh2, cfg.rho2);

  double worst = 0.0;
  const int steps = static_cast<int>(run.trajectory1.size()) - 1;
  for (int s = 1; s <= steps; ++s) {
    const double t = s * dt;
    const auto& u1 = run.trajectory1[s];
    const auto& u1p = run.trajectory1[s - 1];
    const auto& u2 = run.trajectory2[s];
    const auto& u2p = run.trajectory2[s - 1];

    std::vector<double> f1(mesh1.node_count(), 0.0), f2(mesh2.node_count(), 0.0);
    if (cfg.source == SourceMode::manufactured) {
      f1 = assemble_load(
          mesh1,
          [&](double x, double y, double tt) { return source_term(Side::omega1, x, y, tt, problem); },
          t);
      f2 = assemble_load(
          mesh2,
          [&](double x, double y, double tt) { return source_term(Side::omega2, x, y, tt, problem); },
          t);
    }

    const std::vector<double> k1u = k1.multiply(u1);
    const std::vector<double> k2u = k2.multiply(u2);

    for (int k = 1; k < n; ++k) {
      const int g1 = coupling.nodes1[k];
      const int g2 = coupling.nodes2[k];
      const double du1 = (u1[g1] - u1p[g1]) / dt;
      const double du2 = (u2[g2] - u2p[g2]) / dt;
      const double w1 = coupling.inertial_weights_1[k];

      const double lhs = w1 * du2 + (lumped2[g2] * du2 + k2u[g2] - f2[g2]);
      const double rhs = w1 * du1 - (lumped1[g1] * du1 + k1u[g1] - f1[g1]);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace ifem
