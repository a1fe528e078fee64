// rotbif: classification, degree and continuation queries on rotating-frame
// equilibria, with deterministic JSON/CSV output for regression diffing.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rotbif/classify.hpp"
#include "rotbif/degree.hpp"
#include "rotbif/dynamics.hpp"
#include "rotbif/rt4bp.hpp"

namespace {

using namespace rotbif;

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Streaming JSON writer with insertion-ordered keys and %.12g floats, so equal
// runs produce byte-identical documents.
class JsonWriter {
 public:
  void begin_object() { sep(); out_ += '{'; first_.push_back(true); }
  void end_object() { out_ += '}'; first_.pop_back(); }
  void begin_array() { sep(); out_ += '['; first_.push_back(true); }
  void end_array() { out_ += ']'; first_.pop_back(); }
  void key(const std::string& k) {
    sep();
    write_string(k);
    out_ += ':';
    after_key_ = true;
  }
  void value(double v) { sep(); out_ += format_double(v); }
  void value(int v) { sep(); out_ += std::to_string(v); }
  void value(std::size_t v) { sep(); out_ += std::to_string(v); }
  void value(bool v) { sep(); out_ += v ? "true" : "false"; }
  void value(const std::string& s) { sep(); write_string(s); }
  void value(const char* s) { value(std::string(s)); }

  void kv(const std::string& k, double v) { key(k); value(v); }
  void kv(const std::string& k, int v) { key(k); value(v); }
  void kv(const std::string& k, std::size_t v) { key(k); value(v); }
  void kv(const std::string& k, bool v) { key(k); value(v); }
  void kv(const std::string& k, const std::string& v) { key(k); value(v); }
  void kv(const std::string& k, const char* v) { key(k); value(v); }

  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
    }
  }
  void write_string(const std::string& s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            out_ += buf;
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

int thread_count() {
  const char* s = std::getenv("ROTBIF_THREADS");
  if (!s) return 1;
  int v = std::atoi(s);
  return v < 1 ? 1 : v;
}

// Runs jobs 0..count-1 on up to thread_count() workers; results land in
// caller-owned slots, so assembly order stays deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  int workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) job(i);
    });
  for (std::thread& t : pool) t.join();
}

rt4bp::MassTriple parse_masses(const std::string& text, bool normalize) {
  if (text == "eq") return rt4bp::MassTriple::equal();
  double m1, m2, m3;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%n", &m1, &m2, &m3, &consumed) != 3 ||
      consumed != static_cast<int>(text.size()))
    throw std::invalid_argument("--masses expects 'eq' or m1,m2,m3");
  if (normalize) return rt4bp::MassTriple::normalized(m1, m2, m3);
  try {
    return rt4bp::MassTriple(m1, m2, m3);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(e.what()) + " (pass --normalize to rescale)");
  }
}

struct ClassifyArgs {
  double beta1 = 0.0, beta2 = 0.0;
  std::optional<double> beta3;
  std::optional<int> ib;
};

int run_classify(const ClassifyArgs& a) {
  RegionTag tag = region(a.beta1, a.beta2);
  bool on_c = tag == RegionTag::COffBoundary || tag == RegionTag::COnBoundary;
  if (on_c && !a.ib) {
    std::fprintf(stderr,
                 "rotbif: (beta1, beta2) lies on the degenerate set C; the Brouwer "
                 "index is not determined by the betas, pass --ib\n");
    return 3;
  }
  int ib = a.ib ? *a.ib : (a.beta1 * a.beta2 > 0.0 ? 1 : -1);
  EquilibriumReport rep = emanation_report(a.beta1, a.beta2, a.beta3, ib);

  struct Row {
    const char* source;
    double period;
    int gamma;
  };
  std::vector<Row> rows;
  if (rep.t_minus)
    rows.push_back({"T-", *rep.t_minus, gamma2(a.beta1, a.beta2, ib, *rep.t_minus)});
  if (rep.t_plus && (!rep.t_minus || *rep.t_plus != *rep.t_minus))
    rows.push_back({"T+", *rep.t_plus, gamma2(a.beta1, a.beta2, ib, *rep.t_plus)});
  if (rep.vertical_period)
    rows.push_back({"vertical", *rep.vertical_period,
                    gamma3(a.beta1, a.beta2, *a.beta3, ib, *rep.vertical_period)});

  JsonWriter w;
  w.begin_object();
  w.kv("schema", "1");
  w.kv("command", "classify");
  w.kv("beta1", rep.beta1);
  w.kv("beta2", rep.beta2);
  if (rep.beta3) w.kv("beta3", *rep.beta3);
  w.kv("region", to_string(rep.tag));
  w.kv("brouwer_index", rep.brouwer_index);
  if (rep.t_minus) w.kv("t_minus", *rep.t_minus);
  if (rep.t_plus) w.kv("t_plus", *rep.t_plus);
  if (rep.vertical_period) w.kv("vertical_period", *rep.vertical_period);
  w.key("imaginary_spectrum");
  w.begin_array();
  for (const ImagEigen& e : imaginary_spectrum(a.beta1, a.beta2, a.beta3)) {
    w.begin_object();
    w.kv("imag", e.imag);
    w.kv("multiplicity", e.multiplicity);
    w.end_object();
  }
  w.end_array();
  w.key("gamma_table");
  w.begin_array();
  for (const Row& r : rows) {
    w.begin_object();
    w.kv("source", r.source);
    w.kv("period", r.period);
    w.kv("gamma", r.gamma);
    w.end_object();
  }
  w.end_array();
  w.key("branches");
  w.begin_array();
  for (const BranchPrediction& b : rep.branches) {
    w.begin_object();
    w.kv("period", b.period);
    w.kv("gamma", b.gamma);
    w.end_object();
  }
  w.end_array();
  w.kv("nonexistence", rep.nonexistence);
  w.kv("nonplanar", rep.nonplanar);
  w.kv("conjectural", rep.conjectural);
  w.kv("inconclusive", rep.inconclusive);
  w.end_object();
  std::printf("%s\n", w.str().c_str());
  return 0;
}

struct BranchRun {
  std::size_t point = 0;
  rt4bp::Region region = rt4bp::Region::T;
  Branch branch;
  std::string error;
};

int run_rt4bp(const rt4bp::MassTriple& m, bool do_continue, const std::string& out_dir,
              const ContinuationOptions& copt) {
  std::fprintf(stderr, "rotbif: locating libration points...\n");
  rt4bp::Analysis an = rt4bp::analyze(m);
  std::fprintf(stderr, "rotbif: %zu points, %d with nonzero vertical gamma3\n",
               an.points.size(), an.nonzero_gamma3);
  bool seven = an.nonzero_gamma3 >= 7;
  int exit_code = seven ? 0 : 1;

  std::vector<BranchRun> runs;
  if (do_continue) {
    for (std::size_t i = 0; i < an.points.size(); ++i)
      if (an.points[i].gamma3_vertical != 0)
        runs.push_back({i, an.points[i].region, {}, {}});
    std::filesystem::create_directories(out_dir);
    parallel_for(runs.size(), [&](std::size_t k) {
      BranchRun& r = runs[k];
      const rt4bp::LibrationPoint& pt = an.points[r.point];
      HamiltonianSystem sys = rt4bp_spatial(m);
      Eigen::VectorXd q0(3);
      q0 << pt.position.x(), pt.position.y(), 0.0;
      double t0 = 2.0 * M_PI / std::sqrt(pt.beta3);
      try {
        r.branch = continue_branch(sys, q0, t0, copt);
        std::fprintf(stderr, "rotbif: branch at point %zu (%s): %zu orbits, %s\n", r.point,
                     rt4bp::to_string(r.region).c_str(), r.branch.orbits.size(),
                     to_string(r.branch.status));
      } catch (const std::exception& e) {
        r.error = e.what();
        std::fprintf(stderr, "rotbif: branch at point %zu (%s) failed: %s\n", r.point,
                     rt4bp::to_string(r.region).c_str(), e.what());
      }
    });
    for (const BranchRun& r : runs)
      if (!r.error.empty()) exit_code = 1;
  }

  std::vector<std::string> csv_names(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (!runs[k].error.empty()) continue;
    csv_names[k] = "branch_" + std::to_string(runs[k].point) + "_" +
                   rt4bp::to_string(runs[k].region) + ".csv";
    std::ofstream csv(std::filesystem::path(out_dir) / csv_names[k]);
    csv << "step,T,amplitude,max|z|,samples\n";
    for (std::size_t s = 0; s < runs[k].branch.orbits.size(); ++s) {
      const ClosedOrbit& o = runs[k].branch.orbits[s];
      csv << s << ',' << format_double(o.period) << ',' << format_double(o.amplitude) << ','
          << format_double(o.max_abs_z) << ',' << o.states.size() - 1 << '\n';
    }
  }

  JsonWriter w;
  w.begin_object();
  w.kv("schema", "1");
  w.kv("command", "rt4bp");
  w.key("masses");
  w.begin_array();
  for (int i = 1; i <= 3; ++i) w.value(m.m(i));
  w.end_array();
  w.key("points");
  w.begin_array();
  for (std::size_t i = 0; i < an.points.size(); ++i) {
    const rt4bp::LibrationPoint& p = an.points[i];
    w.begin_object();
    w.kv("index", i);
    w.kv("x", p.position.x());
    w.kv("y", p.position.y());
    w.kv("region", rt4bp::to_string(p.region));
    w.kv("beta1", p.beta1);
    w.kv("beta2", p.beta2);
    w.kv("beta3", p.beta3);
    w.kv("brouwer_index", p.brouwer_index);
    w.kv("degenerate", p.degenerate);
    w.kv("gamma3_vertical", p.gamma3_vertical);
    w.kv("vertical_period", 2.0 * M_PI / std::sqrt(p.beta3));
    w.end_object();
  }
  w.end_array();
  w.key("regions");
  w.begin_array();
  for (const rt4bp::RegionSummary& s : an.regions) {
    w.begin_object();
    w.kv("region", rt4bp::to_string(s.region));
    w.kv("degree", s.degree);
    w.kv("index_sum", s.index_sum);
    w.kv("eps", s.eps);
    w.key("points");
    w.begin_array();
    for (std::size_t i : s.points) w.value(i);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.kv("nonzero_gamma3", an.nonzero_gamma3);
  w.kv("seven_branches", seven);
  if (do_continue) {
    w.key("branches");
    w.begin_array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const BranchRun& r = runs[k];
      w.begin_object();
      w.kv("point", r.point);
      w.kv("region", rt4bp::to_string(r.region));
      if (!r.error.empty()) {
        w.kv("error", r.error);
        w.end_object();
        continue;
      }
      w.kv("file", csv_names[k]);
      w.kv("status", to_string(r.branch.status));
      w.kv("orbits", r.branch.orbits.size());
      w.kv("initial_period", r.branch.origin_period);
      if (!r.branch.orbits.empty()) {
        w.kv("final_period", r.branch.orbits.back().period);
        w.kv("final_amplitude", r.branch.orbits.back().amplitude);
      }
      w.kv("evidence", r.branch.evidence);
      w.end_object();
    }
    w.end_array();
  }
  w.end_object();
  std::printf("%s\n", w.str().c_str());
  if (!seven)
    std::fprintf(stderr, "rotbif: fewer than 7 nonzero vertical bifurcation numbers\n");
  return exit_code;
}

int run_degree(const std::string& region_name, const rt4bp::MassTriple& m,
               std::optional<double> eps) {
  std::optional<rt4bp::Region> reg = rt4bp::region_from_string(region_name);
  if (!reg) throw std::invalid_argument("--region expects one of T, O1..O3, D1..D3");
  if (eps) {
    PlanarField field{[&m](const Eigen::Vector2d& q) { return rt4bp::grad_hess(q, m).first; },
                      1e-12};
    BoundaryCurve rim = rt4bp::outline(*reg);
    std::printf("%d\n", winding_degree(field, shrunk_boundary(rim, *eps)));
    return 0;
  }
  // without --eps defer to the adaptive offset, which also cross-checks the
  // winding against the sum of point indices
  rt4bp::Analysis an = rt4bp::analyze(m);
  for (const rt4bp::RegionSummary& s : an.regions)
    if (s.region == *reg) {
      std::printf("%d\n", s.degree);
      return 0;
    }
  throw std::runtime_error("degree: region summary missing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria, bifurcation numbers and periodic-orbit branches of "
               "rotating-frame Newtonian systems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file overriding flag defaults");

  ClassifyArgs cargs;
  CLI::App* classify = app.add_subcommand(
      "classify", "Classify an equilibrium from the eigenvalues of its potential Hessian");
  classify->add_option("--beta1", cargs.beta1, "first planar Hessian eigenvalue")->required();
  classify->add_option("--beta2", cargs.beta2, "second planar Hessian eigenvalue")->required();
  classify->add_option("--beta3", cargs.beta3, "vertical Hessian eigenvalue (spatial case)");
  classify->add_option("--ib", cargs.ib,
                       "Brouwer index of the equilibrium, required on the degenerate set C");

  std::string masses;
  bool normalize = false;
  bool do_continue = false;
  std::string out_dir = ".";
  ContinuationOptions copt;
  copt.max_steps = 30;
  CLI::App* rt4bp_cmd = app.add_subcommand(
      "rt4bp", "Locate and classify the libration points of the restricted triangular "
               "four-body problem");
  rt4bp_cmd->add_option("--masses", masses, "primary masses m1,m2,m3 or 'eq'")->required();
  rt4bp_cmd->add_flag("--normalize", normalize, "rescale the masses to the required total");
  rt4bp_cmd->add_flag("--continue", do_continue,
                      "continue the vertical family at every point with nonzero gamma3");
  rt4bp_cmd->add_option("--out", out_dir, "directory for the branch CSV files");
  rt4bp_cmd->add_option("--max-steps", copt.max_steps, "continuation step budget per branch");
  rt4bp_cmd->add_option("--max-amplitude", copt.max_amplitude,
                        "amplitude bound declaring a branch unbounded");
  rt4bp_cmd->add_option("--max-period", copt.max_period,
                        "period bound declaring a branch unbounded");
  rt4bp_cmd->add_option("--closure-tol", copt.shoot.closure_tol,
                        "Newton tolerance on the periodicity residual");

  std::string region_name;
  std::string masses_d;
  bool normalize_d = false;
  std::optional<double> eps;
  CLI::App* degree_cmd =
      app.add_subcommand("degree", "Brouwer degree of grad V on a shrunk region boundary");
  degree_cmd->add_option("--region", region_name, "T, O1..O3 or D1..D3")->required();
  degree_cmd->add_option("--masses", masses_d, "primary masses m1,m2,m3 or 'eq'")->required();
  degree_cmd->add_flag("--normalize", normalize_d, "rescale the masses to the required total");
  degree_cmd->add_option("--eps", eps,
                         "fixed inward offset (default: adaptive below the point clearance)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) return run_classify(cargs);
    if (rt4bp_cmd->parsed())
      return run_rt4bp(parse_masses(masses, normalize), do_continue, out_dir, copt);
    if (degree_cmd->parsed())
      return run_degree(region_name, parse_masses(masses_d, normalize_d), eps);
  } catch (const rt4bp::RegionEmpty& e) {
    std::fprintf(stderr, "rotbif: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "rotbif: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rotbif: %s\n", e.what());
    return 1;
  }
  return 2;
}
