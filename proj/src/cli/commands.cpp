#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/pipeline.hpp"
#include "nodalscope/errors.hpp"
#include "nodalscope/io.hpp"

namespace nodalscope::cli {

namespace fs = std::filesystem;

namespace {

struct Global {
  std::string out = ".";
  std::uint64_t seed = 0;
  double tol = 1e-3;
  int threads = 0;
  std::vector<double> alphas;
  double beta = 0.01;
  double kappa = 1.0;
  double K1 = 0.0;
  double K2 = 0.0;
};

struct GenArgs {
  long m = 0;
  int dim = 2;
  std::string file;
};

struct CertifyArgs {
  std::string spec;
  double r = 0.0;
  std::string mode = "sandwich";
  double cover_fraction = 0.125;
};

struct NodalArgs {
  std::string spec;
  int N = 0;
};

struct DoublingArgs {
  std::string spec;
  double r = 0.0;
};

struct ReportArgs {
  std::string manifest;
  int N = 0;
  int cubes = 4;
};

Json global_json(const Global& g) {
  Json j = {{"seed", g.seed}, {"tol", g.tol}, {"threads", g.threads}, {"beta", g.beta},
            {"kappa", g.kappa}, {"K1", g.K1}, {"K2", g.K2}};
  j["alphas"] = g.alphas;
  return j;
}

fs::path out_path(const Global& g, const std::string& name) { return fs::path(g.out) / name; }

double k1_of(const Global& g, int dim) { return g.K1 > 0.0 ? g.K1 : default_k1(dim); }
double k2_of(const Global& g, int dim) { return g.K2 > 0.0 ? g.K2 : default_k2(dim); }

int cmd_gen(const Global& g, const GenArgs& a) {
  const TorusModel model(a.dim);
  const auto spec = random_eigenfunction(a.m, model, g.seed);
  const std::string name = a.file.empty() ? "spec_m" + std::to_string(a.m) + "_d" +
                                                std::to_string(a.dim) + "_s" +
                                                std::to_string(g.seed) + ".json"
                                          : a.file;
  const fs::path p = out_path(g, name);
  save_spec(spec, p);
  std::cout << std::setprecision(10) << "lambda " << spec.lambda() << "\nmodes "
            << spec.modes().size() << "\nwrote " << p.string() << '\n';
  return kOk;
}

CertifyOptions certify_options(const std::string& mode, double cover_fraction) {
  CertifyOptions o;
  o.cover_fraction = cover_fraction;
  if (mode == "sandwich") o.mode = CertifyMode::Sandwich;
  else if (mode == "centers") o.mode = CertifyMode::Centers;
  else throw RangeError("unknown certify mode '" + mode + "'");
  return o;
}

int cmd_certify(const Global& g, const CertifyArgs& a) {
  const auto spec = load_spec(a.spec);
  const CertifyOptions opts = certify_options(a.mode, a.cover_fraction);
  const double K1 = k1_of(g, spec.dim()), K2 = k2_of(g, spec.dim());
  ProbeOptions po;
  po.tol = g.tol;
  const BallProbe probe(spec, po);
  double r = a.r;
  if (r <= 0.0) {
    const auto grid = default_r_grid(spec.lambda());
    r = smallest_admissible_r(probe, K1, K2, grid, opts).value_or(grid.empty() ? 0.25 : grid.front());
  }
  auto cert = certify_equidistribution(probe, r, K1, K2, opts);
  cert.spec_id = fs::path(a.spec).stem().string();
  Json cfg = global_json(g);
  cfg["command"] = "certify";
  cfg["spec"] = a.spec;
  cfg["r"] = r;
  cfg["mode"] = a.mode;
  cfg["cover_fraction"] = a.cover_fraction;
  write_json_file(with_provenance(certificate_to_json(cert), cfg), out_path(g, "certificate.json"));
  std::cout << std::setprecision(8) << "r " << r << "\nmin_ratio " << cert.min_ratio
            << "\nmax_ratio " << cert.max_ratio << "\nlower_bound " << cert.lower_bound
            << "\nupper_bound " << cert.upper_bound << '\n'
            << (cert.pass ? "PASS" : "FAIL") << '\n';
  return cert.pass ? kOk : kHypothesisFail;
}

int cmd_nodal(const Global& g, const NodalArgs& a) {
  const auto spec = load_spec(a.spec);
  const int N = a.N > 0 ? a.N : std::max(nodal_resolution_floor(spec.m()), 512);
  const NodalSet ns = extract_nodal(spec, N);
  const auto sing = find_singular_points(spec, N);
  fs::create_directories(g.out);
  std::ofstream csv(out_path(g, "segments.csv"));
  write_segments_csv(csv, ns);
  Json cfg = global_json(g);
  cfg["command"] = "nodal";
  cfg["spec"] = a.spec;
  cfg["N"] = N;
  Json summary = {{"resolution", N},
                  {"length", ns.length},
                  {"length_over_sqrt_lambda", ns.length / std::sqrt(spec.lambda())},
                  {"convergence_estimate", ns.convergence_estimate},
                  {"segments", ns.segments.size()},
                  {"polylines", ns.polylines.size()},
                  {"perturbed_nodes", ns.perturbed_nodes},
                  {"singular_points", singular_points_to_json(sing)}};
  write_json_file(with_provenance(summary, cfg), out_path(g, "nodal.json"));
  std::cout << std::setprecision(10) << "length " << ns.length << "\nsingular_points "
            << sing.size() << '\n';
  return kOk;
}

int cmd_doubling(const Global& g, const DoublingArgs& a) {
  const auto spec = load_spec(a.spec);
  ProbeOptions po;
  po.tol = g.tol;
  const BallProbe probe(spec, po);
  double r = a.r;
  if (r <= 0.0) {
    const auto grid = default_r_grid(spec.lambda());
    const auto found = smallest_admissible_r(probe, k1_of(g, spec.dim()), k2_of(g, spec.dim()), grid);
    if (!found) {
      std::cerr << "no certified radius; pass --r explicitly\n";
      return kHypothesisFail;
    }
    r = *found;
  }
  const CoverSet cover = generate_cover(r, spec.model());
  const auto scales = default_scales(spec.lambda(), r);
  const auto recs = scan_doubling(probe, r, cover.centers, scales, g.threads);
  const auto summary = summarize_doubling(recs, spec.m(), r, spec.lambda());
  fs::create_directories(g.out);
  std::ofstream csv(out_path(g, "doubling.csv"));
  write_doubling_csv(csv, recs);
  Json cfg = global_json(g);
  cfg["command"] = "doubling";
  cfg["spec"] = a.spec;
  cfg["r"] = r;
  write_json_file(with_provenance(doubling_summary_to_json(summary), cfg),
                  out_path(g, "doubling_summary.json"));
  std::cout << std::setprecision(8) << "r " << r << "\nc_star " << summary.c_star
            << "\nmax_index " << summary.max_index << "\nrecords " << summary.n_records << '\n';
  return kOk;
}

// Manifest: {"members": [{"spec": "file.json"} | {"m": 25, "seed": 1, "dim": 2}, ...],
//            "r": optional fixed radius}
std::vector<EigenfunctionSpec> load_family(const fs::path& manifest, std::optional<double>& r) {
  std::ifstream in(manifest);
  if (!in) throw InvalidSpecError("cannot open manifest " + manifest.string());
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpecError("cannot parse manifest: " + std::string(e.what()));
  }
  if (j.contains("r") && !j.at("r").is_null()) r = j.at("r").get<double>();
  std::vector<EigenfunctionSpec> out;
  for (const auto& m : j.at("members")) {
    if (m.contains("spec")) {
      fs::path p = m.at("spec").get<std::string>();
      if (p.is_relative()) p = manifest.parent_path() / p;
      out.push_back(load_spec(p));
    } else {
      const int dim = m.value("dim", 2);
      out.push_back(random_eigenfunction(m.at("m").get<long>(), TorusModel(dim),
                                         m.value("seed", std::uint64_t{0})));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.m() < b.m(); });
  return out;
}

int cmd_report(const Global& g, const ReportArgs& a) {
  std::optional<double> fixed_r;
  const auto family = load_family(a.manifest, fixed_r);
  MeasureOptions mo;
  mo.K1 = g.K1;
  mo.K2 = g.K2;
  mo.tol = g.tol;
  mo.r = fixed_r;
  mo.nodal_resolution = a.N;
  mo.cubes = a.cubes;
  mo.threads = g.threads;
  ReportConfig rc;
  if (!g.alphas.empty()) rc.alphas = g.alphas;
  rc.beta = g.beta;
  rc.kappa = g.kappa;

  std::vector<MemberMeasurement> ms;
  for (const auto& s : family) ms.push_back(measure_member(s, mo));

  std::optional<Calibration> cal;
  for (const auto& m : ms) {
    if (!m.certified) continue;
    const Calibration c = calibrate(m.nodal, m.certificate.r, m.spec.lambda(), m.spec.m(),
                                    m.spec.seed(), rc.beta);
    if (!cal) {
      cal = c;
    } else if (m.spec.m() == cal->m) {
      // Several members at the calibration eigenvalue: keep the largest constants.
      cal->c3 = std::max(cal->c3, c.c3);
      cal->c4 = std::max(cal->c4, c.c4);
    }
  }

  Json cfg = global_json(g);
  cfg["command"] = "report";
  cfg["manifest"] = a.manifest;
  fs::create_directories(g.out);
  std::ofstream csv(out_path(g, "summary.csv"));
  csv << std::setprecision(12)
      << "index,m,seed,dim,lambda,certified,r,nodal_length,c_star,n_lift,eq3,eq4,eq5,"
         "verdict_eq3,verdict_eq4,verdict_eq5\n";
  int failures = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    csv << i << ',' << m.spec.m() << ',' << (m.spec.seed() ? std::to_string(*m.spec.seed()) : "")
        << ',' << m.spec.dim() << ',' << m.spec.lambda() << ',' << (m.certified ? 1 : 0) << ','
        << m.certificate.r << ',';
    if (!m.certified) {
      ++failures;
      csv << ",,,,,,,,\n";
      write_json_file(with_provenance({{"certificate", certificate_to_json(m.certificate)},
                                       {"refused", "certificate failed"}},
                                      cfg),
                      out_path(g, "report_" + std::to_string(i) + ".json"));
      continue;
    }
    const BoundsReport rep = build_report(m.certificate, m.spec.m(), m.spec.seed(),
                                          m.spec.lambda(), m.nodal, m.doubling, m.lift, *cal, rc);
    Json j = report_to_json(rep);
    j["certificate"] = certificate_to_json(m.certificate);
    write_json_file(with_provenance(j, cfg), out_path(g, "report_" + std::to_string(i) + ".json"));
    csv << rep.nodal.nodal_length << ',' << rep.c_star << ',' << rep.n_lift << ','
        << rep.eq3.value << ',' << rep.eq4.value << ',' << rep.eq5.value << ','
        << rep.verdicts.at("eq3") << ',' << rep.verdicts.at("eq4") << ','
        << rep.verdicts.at("eq5") << '\n';
  }
  std::cout << "members " << ms.size() << "\nuncertified " << failures << "\nwrote "
            << out_path(g, "summary.csv").string() << '\n';
  return failures == 0 ? kOk : kHypothesisFail;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"nodalscope: eigenfunction nodal-set laboratory on flat tori"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol", g.tol, "Relative tolerance of sup scans");
  app.add_option("--threads", g.threads, "Worker threads (0 = NODALSCOPE_THREADS or hardware)");
  app.add_option("--alpha", g.alphas, "Exponents alpha for the n >= 3 bound");
  app.add_option("--beta", g.beta, "Exponent beta for the nodal length bound");
  app.add_option("--kappa", g.kappa, "Per-cube constant kappa");
  app.add_option("--K1", g.K1, "Lower equidistribution constant (default vol(B_1)/2)");
  app.add_option("--K2", g.K2, "Upper equidistribution constant (default 2 vol(B_1))");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a random eigenfunction spec");
  gen->add_option("--m", ga.m, "Squared lattice norm")->required();
  gen->add_option("--dim", ga.dim, "Torus dimension (2 or 3)");
  gen->add_option("--file", ga.file, "Output file name inside --out");

  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "Equidistribution certificate");
  cert->add_option("--spec", ca.spec, "Spec JSON")->required();
  cert->add_option("--r", ca.r, "Radius (default: smallest admissible grid radius)");
  cert->add_option("--mode", ca.mode, "sandwich or centers");
  cert->add_option("--cover-fraction", ca.cover_fraction, "Cover radius relative to r");

  NodalArgs na;
  auto* nod = app.add_subcommand("nodal", "Nodal set, length and singular points");
  nod->add_option("--spec", na.spec, "Spec JSON")->required();
  nod->add_option("--N", na.N, "Grid resolution");

  DoublingArgs da;
  auto* dbl = app.add_subcommand("doubling", "Doubling-index scan and growth constant");
  dbl->add_option("--spec", da.spec, "Spec JSON")->required();
  dbl->add_option("--r", da.r, "Context radius (default: certified radius)");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Bounds reports over a family manifest");
  rep->add_option("--manifest", ra.manifest, "Family manifest JSON")->required();
  rep->add_option("--N", ra.N, "Nodal grid resolution");
  rep->add_option("--cubes", ra.cubes, "Lift cubes per member");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  try {
    if (*gen) return cmd_gen(g, ga);
    if (*cert) return cmd_certify(g, ca);
    if (*nod) return cmd_nodal(g, na);
    if (*dbl) return cmd_doubling(g, da);
    if (*rep) return cmd_report(g, ra);
  } catch (const ConditionalHypothesisError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHypothesisFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("nodalscope");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace nodalscope::cli
