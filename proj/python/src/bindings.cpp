#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmsir/errors.hpp"
#include "mmsir/mc_engine.hpp"
#include "mmsir/sir_analytic.hpp"
#include "mmsir/specfun.hpp"
#include "mmsir/spectral_eff.hpp"

namespace py = pybind11;
using namespace mmsir;
using namespace py::literals;

namespace {

RhoMethod method_from(const std::string& name) {
    if (name == "closed") return RhoMethod::closed_form();
    if (name == "gilpelaez") return RhoMethod::gil_pelaez();
    if (name == "euler") return RhoMethod::euler_inversion();
    throw DomainError("method must be 'closed', 'gilpelaez' or 'euler', got '" + name + "'");
}

Allocation allocation_from(const std::string& name) {
    if (name == "uniform") return Allocation::Uniform;
    if (name == "equal_sir") return Allocation::EqualSir;
    throw DomainError("allocation must be 'uniform' or 'equal_sir', got '" + name + "'");
}

// Fixed load when k is given, Poisson when mean is given.
CellLoadModel load_from(std::optional<int> k, std::optional<double> mean) {
    if (k && mean) throw DomainError("give either k or mean, not both");
    if (mean) return CellLoadModel::poisson(*mean);
    return CellLoadModel::fixed(k.value_or(10));
}

SirScenario make_scenario(int n_antennas, std::optional<int> k, std::optional<double> mean,
                          const std::string& allocation, double eta) {
    SirScenario sc{n_antennas, load_from(k, mean), allocation_from(allocation), Delta::from_eta(eta)};
    sc.validate();
    return sc;
}

template <class F>
py::object vectorize(py::object theta, F f) {
    if (py::isinstance<py::float_>(theta) || py::isinstance<py::int_>(theta)) return py::float_(f(theta.cast<double>()));
    auto in = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(theta);
    if (!in) throw py::type_error("expected a number or an array of numbers");
    py::array_t<double> out(in.request().shape);
    const double* src = in.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(src[i]);
    return std::move(out);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SIR and spectral-efficiency distributions of conjugate-beamforming massive-MIMO cells";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    m.def("db_to_linear", &db_to_linear);
    m.def("linear_to_db", &linear_to_db);

    m.def(
        "kummer_1f1", [](std::complex<double> z, double eta) { return kummer_1f1_unit_a(Delta::from_eta(eta), z); },
        "z"_a, "eta"_a, "1F1(1; 1 - 2/eta; z).");
    m.def(
        "s_star", [](double eta) { return solve_s_star(Delta::from_eta(eta)); }, "eta"_a);
    m.def(
        "epsilon", [](double eta) { return AnalyticEnv::from_eta(eta).epsilon; }, "eta"_a);
    m.def(
        "mean_inverse_rho", [](double eta) { return mean_inverse_rho(Delta::from_eta(eta)); }, "eta"_a,
        "E[1/rho].");

    m.def(
        "rho_cdf",
        [](py::object theta, double eta, const std::string& method) {
            const auto env = AnalyticEnv::from_eta(eta);
            const auto meth = method_from(method);
            return vectorize(theta, [&](double t) { return rho_cdf(t, env, meth); });
        },
        "theta"_a, "eta"_a = 4.0, "method"_a = "gilpelaez", "CDF of the single-user SIR rho at linear thresholds.");

    py::class_<SirScenario>(m, "Scenario")
        .def(py::init(&make_scenario), "n_antennas"_a = 100, "k"_a = py::none(), "mean"_a = py::none(),
             "allocation"_a = "uniform", "eta"_a = 4.0)
        .def_readonly("n_antennas", &SirScenario::n_antennas)
        .def_property_readonly("eta", [](const SirScenario& s) { return s.delta.eta(); })
        .def_property_readonly("allocation", [](const SirScenario& s) { return to_string(s.allocation); })
        .def_property_readonly("poisson", [](const SirScenario& s) { return !s.load.is_fixed(); })
        .def_property_readonly("load", [](const SirScenario& s) { return s.load.nominal(); })
        .def("ratio", &SirScenario::ratio)
        .def("__repr__", [](const SirScenario& s) {
            return "Scenario(n_antennas=" + std::to_string(s.n_antennas) + ", " +
                   (s.load.is_fixed() ? "k=" + std::to_string(s.load.k) : "mean=" + std::to_string(s.load.mean)) +
                   ", allocation='" + to_string(s.allocation) + "', eta=" + std::to_string(s.delta.eta()) + ")";
        });

    m.def(
        "sir_cdf",
        [](py::object theta, const SirScenario& sc, const std::string& method) {
            const auto meth = method_from(method);
            return vectorize(theta, [&](double t) { return sir_cdf(t, sc, meth); });
        },
        "theta"_a, "scenario"_a, "method"_a = "gilpelaez", "Per-user SIR CDF at linear thresholds.");
    m.def("hardening_limit", &hardening_limit, "scenario"_a, "SIR every user reaches as N_a grows with N_a/K fixed.");
    m.def(
        "se_cdf",
        [](py::object zeta, const SirScenario& sc, const std::string& method) {
            const auto meth = method_from(method);
            return vectorize(zeta, [&](double z) { return se_cdf(z, sc, meth); });
        },
        "zeta"_a, "scenario"_a, "method"_a = "gilpelaez");
    m.def(
        "se_percentile",
        [](double p, const SirScenario& sc, const std::string& method) { return se_percentile(p, sc, method_from(method)); },
        "p"_a, "scenario"_a, "method"_a = "gilpelaez");
    m.def("avg_user_se", &avg_user_se, "scenario"_a);
    m.def("avg_sum_se", &avg_sum_se, "scenario"_a);

    m.def(
        "run_montecarlo",
        [](const SirScenario& sc, const std::string& layout, int n_cells, double bs_density, double sigma_db,
           std::uint64_t samples, std::uint64_t snapshots, std::uint64_t seed, unsigned threads,
           const std::string& pilot, int reuse) {
            McConfig cfg;
            cfg.layout = layout == "hex"   ? LayoutSpec::hex(n_cells, bs_density)
                         : layout == "ppp" ? LayoutSpec::ppp(n_cells, bs_density)
                                           : throw DomainError("layout must be 'hex' or 'ppp'");
            cfg.prop.eta = sc.delta.eta();
            cfg.prop.sigma_db = sigma_db;
            cfg.n_antennas = sc.n_antennas;
            cfg.load = sc.load;
            cfg.allocation = sc.allocation;
            cfg.pilot = pilot == "none"     ? PilotConfig::none()
                        : pilot == "hex"    ? PilotConfig::hex(reuse)
                        : pilot == "random" ? PilotConfig::random_search()
                                            : throw DomainError("pilot must be 'none', 'hex' or 'random'");
            cfg.seed = seed;
            cfg.target_samples = samples;
            cfg.snapshots = snapshots;
            cfg.threads = threads;
            McResult r;
            {
                py::gil_scoped_release release;
                r = run_montecarlo(cfg);
            }
            py::dict out;
            out["sir_db"] = py::array_t<double>(static_cast<py::ssize_t>(r.sir_db.size()), r.sir_db.data());
            out["snapshots"] = r.snapshots;
            out["empty_snapshots"] = r.empty_snapshots;
            out["mean_effective_reuse"] = r.mean_effective_reuse;
            return out;
        },
        "scenario"_a, "layout"_a = "hex", "n_cells"_a = 499, "bs_density"_a = 1.0, "sigma_db"_a = 0.0,
        "samples"_a = 200000, "snapshots"_a = 0, "seed"_a = 1, "threads"_a = 0, "pilot"_a = "none", "reuse"_a = 7,
        "Reference-cell SIR samples in dB from random network snapshots.");
}
