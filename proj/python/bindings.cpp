#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nodalscope/certify.hpp"
#include "nodalscope/doubling.hpp"
#include "nodalscope/errors.hpp"
#include "nodalscope/fields.hpp"
#include "nodalscope/geometry.hpp"
#include "nodalscope/io.hpp"
#include "nodalscope/lift.hpp"
#include "nodalscope/nodal.hpp"
#include "nodalscope/spectrum.hpp"

namespace py = pybind11;
using namespace nodalscope;

namespace {

Point to_point(const std::vector<double>& c) { return Point(std::span<const double>(c)); }

Vec to_vec(const std::vector<double>& c) {
  Vec v{};
  for (std::size_t i = 0; i < c.size() && i < 3; ++i) v[i] = c[i];
  return v;
}

std::vector<double> from_point(const Point& p) {
  return std::vector<double>(p.vec().begin(), p.vec().begin() + p.dim());
}

py::dict cert_dict(const EquidistCertificate& c) {
  py::dict d;
  d["r"] = c.r;
  d["K1"] = c.K1;
  d["K2"] = c.K2;
  d["min_ratio"] = c.min_ratio;
  d["max_ratio"] = c.max_ratio;
  d["lower_bound"] = c.lower_bound;
  d["upper_bound"] = c.upper_bound;
  d["pass"] = c.pass;
  d["centers_used"] = c.centers_used;
  return d;
}

EigenfunctionSpec make_spec(int dim, long m,
                            const std::vector<std::tuple<std::vector<int>, double, double>>& modes,
                            std::optional<std::uint64_t> seed) {
  std::vector<Mode> ms;
  for (const auto& [k, a, b] : modes) {
    Mode md;
    md.k.dim = dim;
    for (std::size_t i = 0; i < k.size() && i < 3; ++i) md.k.k[i] = k[i];
    md.a = a;
    md.b = b;
    ms.push_back(md);
  }
  return EigenfunctionSpec(TorusModel(dim), m, std::move(ms), seed);
}

}  // namespace

PYBIND11_MODULE(_nodalscope, m) {
  m.doc() = "Exact toral eigenfunctions, ball statistics, doubling indices and nodal sets";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "NodalscopeError", PyExc_RuntimeError);

  py::class_<EigenfunctionSpec>(m, "EigenfunctionSpec")
      .def(py::init(&make_spec), py::arg("dim"), py::arg("m"), py::arg("modes"),
           py::arg("seed") = std::nullopt)
      .def_property_readonly("dim", &EigenfunctionSpec::dim)
      .def_property_readonly("m", &EigenfunctionSpec::m)
      .def_property_readonly("lam", &EigenfunctionSpec::lambda)
      .def_property_readonly("seed", &EigenfunctionSpec::seed)
      .def_property_readonly("modes",
                             [](const EigenfunctionSpec& s) {
                               py::list out;
                               for (const auto& md : s.modes()) {
                                 std::vector<int> k(md.k.k.begin(), md.k.k.begin() + s.dim());
                                 out.append(py::make_tuple(k, md.a, md.b));
                               }
                               return out;
                             })
      .def("to_json", [](const EigenfunctionSpec& s) { return spec_to_json(s).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return spec_from_json(Json::parse(text)); })
      .def(py::self == py::self);

  m.def("enumerate_lattice", [](long mm, int n) {
    std::vector<std::vector<int>> out;
    for (const auto& k : enumerate_lattice(mm, n)) out.emplace_back(k.k.begin(), k.k.begin() + n);
    return out;
  });
  m.def("random_eigenfunction",
        [](long mm, int dim, std::uint64_t seed) { return random_eigenfunction(mm, TorusModel(dim), seed); },
        py::arg("m"), py::arg("dim") = 2, py::arg("seed") = 0);
  m.def("sine_mode", [](int k, int dim) { return sine_mode(k, TorusModel(dim)); }, py::arg("k"),
        py::arg("dim") = 2);
  m.def("product_mode", &product_mode);
  m.def("evaluate", [](const EigenfunctionSpec& s, const std::vector<double>& x) {
    return evaluate(s, to_point(x));
  });
  m.def("evaluate_gradient", [](const EigenfunctionSpec& s, const std::vector<double>& x) {
    const Vec g = evaluate_gradient(s, to_point(x));
    return std::vector<double>(g.begin(), g.begin() + s.dim());
  });
  m.def("laplacian_residual", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                                 double h) { return laplacian_residual(s, to_point(x), h); });

  m.def("geodesic_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
    return geodesic_distance(to_point(a), to_point(b), TorusModel(static_cast<int>(a.size())));
  });
  m.def("ball_volume", [](double r, int dim) { return ball_volume(r, TorusModel(dim)); });
  m.def("generate_cover", [](double r, int dim) {
    const CoverSet c = generate_cover(r, TorusModel(dim));
    py::dict d;
    d["radius"] = c.radius;
    d["per_axis"] = c.per_axis;
    d["count"] = c.centers.size();
    d["overlap_bound"] = c.overlap_bound;
    return d;
  });

  py::class_<BallProbe>(m, "BallProbe")
      .def(py::init([](const EigenfunctionSpec& s, double tol) {
             ProbeOptions o;
             o.tol = tol;
             return BallProbe(s, o);
           }),
           py::arg("spec"), py::arg("tol") = 1e-3)
      .def_property_readonly("grid_resolution", &BallProbe::grid_resolution)
      .def("sup_sq", [](const BallProbe& p, const std::vector<double>& x, double s) {
        return p.sup(Channel::PsiSq, to_vec(x), s).value;
      })
      .def("sup_q", [](const BallProbe& p, const std::vector<double>& x, double s) {
        return p.sup(Channel::Q, to_vec(x), s).value;
      })
      .def("mass", [](const BallProbe& p, const std::vector<double>& x, double r) {
        return p.mass(to_vec(x), r);
      });

  m.def("sup_on_ball", [](const EigenfunctionSpec& s, const std::vector<double>& x, double r,
                          double tol) { return sup_on_ball(s, to_point(x), r, tol); },
        py::arg("spec"), py::arg("center"), py::arg("s"), py::arg("tol") = 1e-3);
  m.def("l2_on_ball", [](const EigenfunctionSpec& s, const std::vector<double>& x, double r,
                         double tol) { return l2_on_ball(s, to_point(x), r, tol); },
        py::arg("spec"), py::arg("center"), py::arg("r"), py::arg("tol") = 1e-3);
  m.def("q_on_ball", [](const EigenfunctionSpec& s, const std::vector<double>& x, double r) {
    return q_on_ball(s, to_point(x), r, s.lambda());
  });

  m.def("doubling_index_sup", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                                 double d) { return doubling_index_sup(s, to_point(x), d); });
  m.def("doubling_index_l2", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                                double d) { return doubling_index_l2(s, to_point(x), d); });
  m.def("q_growth_ratio", [](const EigenfunctionSpec& s, const std::vector<double>& x, double d) {
    return q_growth_ratio(s, to_point(x), d);
  });

  m.def("extract_nodal", [](const EigenfunctionSpec& s, int N) {
    const NodalSet ns = extract_nodal(s, N);
    py::dict d;
    d["length"] = ns.length;
    d["resolution"] = ns.resolution;
    d["convergence_estimate"] = ns.convergence_estimate;
    d["segments"] = ns.segments.size();
    d["polylines"] = ns.polylines.size();
    return d;
  });
  m.def("find_singular_points", [](const EigenfunctionSpec& s, int N) {
    py::list out;
    for (const auto& p : find_singular_points(s, N)) {
      py::dict d;
      d["location"] = from_point(p.location);
      d["vanishing_order"] = p.vanishing_order;
      d["residual"] = p.residual;
      out.append(d);
    }
    return out;
  });
  m.def("vanishing_order", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                              double dmax) {
    const auto v = vanishing_order(s, to_point(x), dmax);
    return py::make_tuple(v.order, v.slope);
  }, py::arg("spec"), py::arg("x"), py::arg("delta_max") = 0.02);

  m.def("certify_equidistribution",
        [](const EigenfunctionSpec& s, double r, std::optional<double> K1, std::optional<double> K2) {
          return cert_dict(certify_equidistribution(s, r, K1.value_or(default_k1(s.dim())),
                                                    K2.value_or(default_k2(s.dim()))));
        },
        py::arg("spec"), py::arg("r"), py::arg("K1") = std::nullopt, py::arg("K2") = std::nullopt);

  m.def("lift_evaluate", [](const EigenfunctionSpec& s, const std::vector<double>& x, double t) {
    return lift_evaluate(s, to_point(x), t);
  });
  m.def("harmonicity_residual", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                                   double t, double h) {
    return harmonicity_residual(s, to_point(x), t, h);
  });
  m.def("cube_doubling_index", [](const EigenfunctionSpec& s, const std::vector<double>& x,
                                  double r) {
    const CubeIndex c = cube_doubling_index(BallProbe(s), to_point(x), r);
    py::dict d;
    d["N_value"] = c.n_value;
    d["argmax_scale"] = c.argmax_scale;
    d["balls_scanned"] = c.balls_scanned;
    return d;
  });
  m.def("logunov_bound", &logunov_bound, py::arg("N"), py::arg("r"), py::arg("alpha"),
        py::arg("kappa"), py::arg("dim_d"));
}
