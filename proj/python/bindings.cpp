#include "mixedvol/acceptance.hpp"
#include "mixedvol/errors.hpp"
#include "mixedvol/heston.hpp"
#include "mixedvol/kou.hpp"
#include "mixedvol/mixed.hpp"
#include "mixedvol/nig.hpp"
#include "mixedvol/oracles.hpp"
#include "mixedvol/smile.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace mixedvol;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tail and smile asymptotics for Heston models with Kou or NIG jumps";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<BracketError>(m, "BracketError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
    py::register_exception<MomentExplosionError>(m, "MomentExplosionError", base.ptr());
    py::register_exception<StripError>(m, "StripError", base.ptr());
    py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
    py::register_exception<NoArbitrageError>(m, "NoArbitrageError", base.ptr());

    py::enum_<Wing>(m, "Wing").value("Large", Wing::Large).value("Small", Wing::Small);
    py::enum_<Dominant>(m, "Dominant").value("Jump", Dominant::Jump).value("Diffusion", Dominant::Diffusion);
    py::enum_<JumpKind>(m, "JumpKind")
        .value("None_", JumpKind::None)
        .value("Kou", JumpKind::Kou)
        .value("NIG", JumpKind::NIG);
    py::enum_<TailSide>(m, "TailSide").value("AtInfinity", TailSide::AtInfinity).value("AtZero", TailSide::AtZero);

    py::class_<HestonParams>(m, "HestonParams")
        .def(py::init([](double mu, double a, double b, double c, double rho, double x0, double y0, double t) {
                 HestonParams p{mu, a, b, c, rho, x0, y0, t};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("mu") = 0.0, py::arg("a") = 1.0, py::arg("b") = 2.0, py::arg("c") = 0.5,
             py::arg("rho") = -0.3, py::arg("x0") = 1.0, py::arg("y0") = 0.04, py::arg("t") = 1.0)
        .def_readwrite("mu", &HestonParams::mu)
        .def_readwrite("a", &HestonParams::a)
        .def_readwrite("b", &HestonParams::b)
        .def_readwrite("c", &HestonParams::c)
        .def_readwrite("rho", &HestonParams::rho)
        .def_readwrite("x0", &HestonParams::x0)
        .def_readwrite("y0", &HestonParams::y0)
        .def_readwrite("t", &HestonParams::t);

    py::class_<KouJumpParams>(m, "KouJumpParams")
        .def(py::init([](double lambda, double eta1, double eta2, double p, std::optional<double> q, double t) {
                 KouJumpParams k{lambda, eta1, eta2, p, q.value_or(1.0 - p), t};
                 k.validate();
                 return k;
             }),
             py::kw_only(), py::arg("lam"), py::arg("eta1"), py::arg("eta2"), py::arg("p"),
             py::arg("q") = py::none(), py::arg("t") = 1.0)
        .def_readonly("lam", &KouJumpParams::lambda)
        .def_readonly("eta1", &KouJumpParams::eta1)
        .def_readonly("eta2", &KouJumpParams::eta2)
        .def_readonly("p", &KouJumpParams::p)
        .def_readonly("q", &KouJumpParams::q)
        .def_readonly("t", &KouJumpParams::t);

    py::class_<NIGParams>(m, "NIGParams")
        .def(py::init([](double alpha, double delta, double t) {
                 NIGParams n{alpha, delta, t};
                 n.validate();
                 return n;
             }),
             py::kw_only(), py::arg("alpha"), py::arg("delta"), py::arg("t") = 1.0)
        .def_readonly("alpha", &NIGParams::alpha)
        .def_readonly("delta", &NIGParams::delta)
        .def_readonly("t", &NIGParams::t);

    py::class_<CriticalMoments>(m, "CriticalMoments")
        .def_readonly("s_plus", &CriticalMoments::s_plus)
        .def_readonly("s_minus", &CriticalMoments::s_minus)
        .def_readonly("sigma_plus", &CriticalMoments::sigma_plus)
        .def_readonly("sigma_minus", &CriticalMoments::sigma_minus)
        .def_readonly("kappa_plus", &CriticalMoments::kappa_plus)
        .def_readonly("kappa_minus", &CriticalMoments::kappa_minus);

    py::class_<HestonTailConstants>(m, "HestonTailConstants")
        .def_readonly("A1", &HestonTailConstants::A1)
        .def_readonly("A2", &HestonTailConstants::A2)
        .def_readonly("A3", &HestonTailConstants::A3)
        .def_readonly("A1_tilde", &HestonTailConstants::A1t)
        .def_readonly("A2_tilde", &HestonTailConstants::A2t)
        .def_readonly("A3_tilde", &HestonTailConstants::A3t)
        .def_readonly("B1", &HestonTailConstants::B1)
        .def_readonly("B1_tilde", &HestonTailConstants::B1t);

    m.def("critical_moments", [](const HestonParams& p) { return critical_moments(p); });
    m.def("tail_constants", py::overload_cast<const HestonParams&>(&tail_constants));
    m.def("explosion_time", &explosion_time, py::arg("p"), py::arg("s"));

    py::class_<TailAsymptote>(m, "TailAsymptote")
        .def_readonly("r1", &TailAsymptote::r1)
        .def_readonly("r2", &TailAsymptote::r2)
        .def_readonly("r3", &TailAsymptote::r3)
        .def_readonly("r4", &TailAsymptote::r4)
        .def_readonly("side", &TailAsymptote::side)
        .def_readonly("extrapolated", &TailAsymptote::extrapolated)
        .def_property_readonly("error_order", [](const TailAsymptote& t) { return to_string(t.error_order); })
        .def("value", &TailAsymptote::value)
        .def("log_value", &TailAsymptote::log_value)
        .def("log_value_at_log", &TailAsymptote::log_value_at_log)
        .def("error_bound", &TailAsymptote::error_bound);

    py::class_<MixedModel>(m, "MixedModel")
        .def_static("heston_only", &MixedModel::heston_only, py::arg("heston"))
        .def_static("heston_kou", &MixedModel::heston_kou, py::arg("heston"), py::arg("kou"))
        .def_static("heston_nig", &MixedModel::heston_nig, py::arg("heston"), py::arg("nig"))
        .def_property_readonly("kind", &MixedModel::kind)
        .def_property_readonly("heston", &MixedModel::heston)
        .def_property_readonly("moments", &MixedModel::moments)
        .def_property_readonly("constants", &MixedModel::constants)
        .def("with_drift", &MixedModel::with_drift)
        .def("risk_neutral", &MixedModel::risk_neutral)
        .def("risk_neutral_drift", &MixedModel::risk_neutral_drift)
        .def("moment_strip", &MixedModel::moment_strip)
        .def("log_moment", &MixedModel::log_moment);

    py::class_<WingRegime>(m, "WingRegime")
        .def_readonly("wing", &WingRegime::wing)
        .def_readonly("dominant", &WingRegime::dominant)
        .def_readonly("margin", &WingRegime::margin);

    m.def("classify_wing", &classify_wing, py::arg("model"), py::arg("wing"), py::arg("rel_tol") = 1e-9);
    m.def("mixed_asymptote", &mixed_asymptote, py::arg("model"), py::arg("wing"), py::arg("rel_tol") = 1e-9);
    m.def("mixed_asymptote_via_mellin", &mixed_asymptote_via_mellin, py::arg("model"), py::arg("wing"),
          py::arg("rel_tol") = 1e-9);
    m.def("nig_tail_asymptote", &nig_tail_asymptote);
    m.def("nig_zero_asymptote", &nig_zero_asymptote);
    m.def(
        "density_fourier", [](const MixedModel& md, double x) { return oracles::density_fourier(md, x); },
        py::arg("model"), py::arg("x"));
    m.def(
        "log_density_fourier", [](const MixedModel& md, double x) { return oracles::log_density_fourier(md, x); },
        py::arg("model"), py::arg("x"));
    m.def(
        "simulate_paths",
        [](const MixedModel& md, std::uint64_t n, std::uint64_t seed, int steps) {
            oracles::SimulationOptions opt;
            opt.steps = steps;
            return oracles::simulate_paths(md, n, seed, opt);
        },
        py::arg("model"), py::arg("n_paths"), py::arg("seed"), py::arg("steps") = 200);

    py::class_<SmileExpansion>(m, "SmileExpansion")
        .def_readonly("wing", &SmileExpansion::wing)
        .def_readonly("c_lead", &SmileExpansion::c_lead)
        .def_readonly("c_const", &SmileExpansion::c_const)
        .def_readonly("c_llog", &SmileExpansion::c_llog)
        .def_readonly("c_inv", &SmileExpansion::c_inv)
        .def_readonly("c_llog2", &SmileExpansion::c_llog2)
        .def_readonly("dominant", &SmileExpansion::dominant)
        .def("log_moneyness", &SmileExpansion::log_moneyness);

    m.def(
        "smile_expansion", [](const MixedModel& md, Wing w, double tol) { return smile_expansion(md, w, tol); },
        py::arg("model"), py::arg("wing"), py::arg("rel_tol") = 1e-9);
    m.def(
        "implied_vol_approx", [](const SmileExpansion& e, double K) { return implied_vol_approx(e, K); },
        py::arg("expansion"), py::arg("K"));
    m.def(
        "implied_vol_from_asymptotic_price",
        [](const MixedModel& md, Wing w, double K, double tol) { return implied_vol_from_asymptotic_price(md, w, K, tol); },
        py::arg("model"), py::arg("wing"), py::arg("K"), py::arg("rel_tol") = 1e-9);
    m.def("bs_call", &bs_call, py::arg("x0"), py::arg("K"), py::arg("T"), py::arg("sigma"));
    m.def("bs_put", &bs_put, py::arg("x0"), py::arg("K"), py::arg("T"), py::arg("sigma"));
    m.def("bs_implied_vol", &bs_implied_vol, py::arg("price"), py::arg("x0"), py::arg("K"), py::arg("T"));

    py::class_<acceptance::Result>(m, "AcceptanceResult")
        .def_readonly("id", &acceptance::Result::id)
        .def_readonly("name", &acceptance::Result::name)
        .def_readonly("passed", &acceptance::Result::passed)
        .def_readonly("known_failure", &acceptance::Result::known_failure)
        .def_readonly("measured", &acceptance::Result::measured)
        .def_readonly("seconds", &acceptance::Result::seconds)
        .def("__str__", &acceptance::format);
    m.def(
        "run_criterion",
        [](int id, double tolerance_scale) {
            acceptance::Options opt;
            opt.tolerance_scale = tolerance_scale;
            py::gil_scoped_release release;
            return acceptance::run(id, opt);
        },
        py::arg("id"), py::arg("tolerance_scale") = 1.0);
}
