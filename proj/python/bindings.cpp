#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "anisoframe/decay.hpp"
#include "anisoframe/democracy.hpp"
#include "anisoframe/errors.hpp"
#include "anisoframe/frame2d.hpp"
#include "anisoframe/interpolation.hpp"
#include "anisoframe/rnla.hpp"
#include "anisoframe/seq_spaces.hpp"

namespace py = pybind11;
using namespace anisoframe;

namespace {

// Sequences cross the boundary as {index text: complex}, the same index text as coefficient files.
using PySeq = std::map<std::string, Complex>;

CoeffSeq to_seq(const PySeq& in) {
  CoeffSeq out;
  for (const auto& [k, v] : in) out[parse_index_line(k)] += v;
  return out;
}

PySeq from_seq(const CoeffSeq& in) {
  PySeq out;
  for (const auto& [q, v] : in) out.emplace(format_index(q), v);
  return out;
}

IndexSet to_set(const std::vector<std::string>& in) {
  IndexSet out;
  for (const auto& k : in) out.insert(parse_index_line(k));
  return out;
}

GridFunction to_grid(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ParameterError("image must be a square 2-D array");
  GridFunction f = GridFunction::zeros(static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), f.data.begin());
  return f;
}

py::array_t<Complex> from_grid(const GridFunction& f) {
  py::array_t<Complex> out({f.n, f.n});
  std::copy(f.data.begin(), f.data.end(), out.mutable_data());
  return out;
}

SystemConfig config(int n, int jmax, int order) { return SystemConfig{n, jmax, order, true, true, {}}; }

}  // namespace

PYBIND11_MODULE(_anisoframe, m) {
  m.doc() = "Cone-adapted discrete shearlet frame, sequence-space norms and approximation tools";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<InvalidIndex>(m, "InvalidIndex", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);

  py::class_<ShearletSystem2D>(m, "ShearletSystem")
      .def(py::init([](int n, int jmax, int order) { return ShearletSystem2D(config(n, jmax, order)); }), py::arg("n") = 256,
           py::arg("jmax") = 3, py::arg("order") = 3)
      .def_property_readonly("n", &ShearletSystem2D::n)
      .def_property_readonly("jmax", &ShearletSystem2D::max_scale)
      .def_property_readonly("resolvable_radius", &ShearletSystem2D::resolvable_radius)
      .def_property_readonly("coefficient_count", &ShearletSystem2D::coefficient_count)
      .def_property_readonly("band_count", [](const ShearletSystem2D& s) { return s.bands().size(); })
      .def("parseval_defect", [](const ShearletSystem2D& s) { return parseval_defect(s).max(); })
      .def("analyze", [](const ShearletSystem2D& s, const py::array_t<Complex, py::array::c_style | py::array::forcecast>& f) {
        return from_seq(analyze(to_grid(f), s));
      })
      .def("synthesize", [](const ShearletSystem2D& s, const PySeq& c) { return from_grid(synthesize(to_seq(c), s)); });

  m.def("random_band_limited", [](int n, double radius, unsigned long long seed, bool real_valued) {
    return from_grid(random_band_limited(n, radius, seed, real_valued));
  }, py::arg("n"), py::arg("radius"), py::arg("seed"), py::arg("real_valued") = true);
  m.def("band_limit", [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& f, double radius) {
    return from_grid(band_limit(to_grid(f), radius));
  });
  m.def("cartoon_image", [](int n) { return from_grid(cartoon_image(n)); });

  m.def("besov_norm", [](const PySeq& c, double s, double p, double q) { return besov_norm(to_seq(c), {s, p, q}); },
        py::arg("coeffs"), py::arg("s"), py::arg("p"), py::arg("q"));
  m.def("tl_norm", [](const PySeq& c, double s, double p, double q) { return tl_norm(to_seq(c), {s, p, q}); },
        py::arg("coeffs"), py::arg("s"), py::arg("p"), py::arg("q"));
  m.def("lorentz_norm", [](const PySeq& c, double s, double p_weight, double beta, double p, double mu) {
    const CoeffSeq seq = to_seq(c);
    return lorentz_norm(seq, canonical_weights(seq, s, p_weight), beta, p, mu);
  }, py::arg("coeffs"), py::arg("s"), py::arg("p_weight"), py::arg("beta"), py::arg("p"), py::arg("mu"),
        "Lorentz norm of the weighted sequence u_Q c_Q with u the canonical weight of smoothness s, integrability p_weight.");

  m.def("democracy_ratio", [](const std::vector<std::string>& gamma, std::tuple<double, double, double> a,
                              std::tuple<double, double, double> b) {
    const auto [s1, p1, q1] = a;
    const auto [s2, p2, q2] = b;
    const DemocracyReport r = democracy_ratio(to_set(gamma), {s1, p1, q1}, {s2, p2, q2});
    return py::dict(py::arg("norm") = r.norm, py::arg("lower_ratio") = r.lower_ratio, py::arg("upper_ratio") = r.upper_ratio,
                    py::arg("alpha") = r.alpha);
  });
  m.def("lemma31_constant", &lemma31_constant, py::arg("dim"), py::arg("gamma"));

  m.def("sigma_curve", [](const PySeq& c, double s, double p, double beta, const std::string& oracle) {
    const ApproxCurve curve = sigma_curve(to_seq(c), ErrorSpace::besov(s, p), beta, parse_oracle(oracle));
    return std::make_pair(curve.t, curve.sigma);
  }, py::arg("coeffs"), py::arg("s"), py::arg("p"), py::arg("beta"), py::arg("oracle") = "exact",
        "Best approximation error in b^{s,p}_p against the measure budget t, as (t, sigma) breakpoints.");
  m.def("sigma_exact", [](const PySeq& c, double s, double p, double beta, double t) {
    return sigma_exact(to_seq(c), ErrorSpace::besov(s, p), beta, t);
  }, py::arg("coeffs"), py::arg("s"), py::arg("p"), py::arg("beta"), py::arg("t"));
  m.def("approx_space_norm", [](const PySeq& c, double s, double p, double beta, double xi, double mu, const std::string& oracle) {
    return approx_space_norm(to_seq(c), ErrorSpace::besov(s, p), beta, {xi, mu}, parse_oracle(oracle));
  }, py::arg("coeffs"), py::arg("s"), py::arg("p"), py::arg("beta"), py::arg("xi"), py::arg("mu"), py::arg("oracle") = "exact");

  m.def("identical_space_constant", &identical_space_constant, py::arg("theta"), py::arg("q"));
  m.def("interp_norm_besov", [](const PySeq& c, double theta, double q, std::tuple<double, double> x, std::tuple<double, double> y) {
    const auto [sx, px] = x;
    const auto [sy, py_] = y;
    const InterpBand b = interp_norm(to_seq(c), theta, q, {SpaceDesc::besov(sx, px, px), SpaceDesc::besov(sy, py_, py_)});
    return std::make_pair(b.lower, b.upper);
  }, py::arg("coeffs"), py::arg("theta"), py::arg("q"), py::arg("x"), py::arg("y"),
        "Two-sided band for the real interpolation norm between b^{sx,px}_{px} and b^{sy,py}_{py}.");

  m.def("decay_curves", [](int n, int jmax, const std::vector<std::size_t>& budgets) {
    const ShearletSystem2D sys(config(n, jmax, 3));
    const DecayResult r = decay_curves(sys, band_limit(cartoon_image(n), sys.resolvable_radius()), budgets);
    return py::dict(py::arg("shearlet") = r.frame.error, py::arg("haar") = r.haar.error,
                    py::arg("shearlet_slope") = r.frame.slope, py::arg("haar_slope") = r.haar.slope,
                    py::arg("energy") = r.energy);
  }, py::arg("n"), py::arg("jmax"), py::arg("budgets"));
}
