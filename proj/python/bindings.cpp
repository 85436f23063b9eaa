#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "locc/bipartite.hpp"
#include "locc/error.hpp"
#include "locc/fourqubit.hpp"
#include "locc/oracle.hpp"
#include "locc/schmidt.hpp"

namespace py = pybind11;
namespace fq = locc::fourqubit;

namespace {

using SeedTuple = std::tuple<double, std::complex<double>, std::complex<double>, std::complex<double>>;
using Gammas = std::array<fq::ParamVector, 4>;

locc::SchmidtVector schmidt(const std::vector<double>& raw) { return locc::SchmidtVector::canonicalize(raw); }

py::dict report(const locc::MeasureReport& r) {
    py::dict d;
    d["quantity"] = locc::to_string(r.quantity);
    d["entanglement"] = r.entanglement;
    d["volume"] = r.volume;
    d["dimension"] = r.dimension;
    d["sup"] = r.sup;
    d["sup_symbolic"] = r.sup_symbolic;
    d["k"] = r.family_k;
    d["std_error"] = r.std_error ? py::cast(*r.std_error) : py::none();
    return d;
}

fq::FourQubitForm make_form(const Gammas& gammas, const SeedTuple& seed) {
    fq::FourQubitForm f;
    f.seed.a = std::get<0>(seed);
    f.seed.b = std::get<1>(seed);
    f.seed.c = std::get<2>(seed);
    f.seed.d = std::get<3>(seed);
    fq::validate_seed(f.seed);
    f.gammas = gammas;
    return fq::classify(fq::standard_form(f));
}

locc::McConfig mc(std::uint64_t samples, std::uint64_t seed, int threads) {
    locc::McConfig c;
    c.samples = samples;
    c.seed = seed;
    c.threads = threads;
    return c;
}

py::dict estimate(const locc::McEstimate& e) {
    py::dict d;
    d["estimate"] = e.estimate;
    d["std_error"] = e.std_error;
    d["hits"] = e.hits;
    d["samples"] = e.samples;
    d["seed"] = e.seed;
    return d;
}

const SeedTuple kReferenceSeed{0.6, {0.5, 0.1}, {0.3, -0.2}, {0.5, 0.0}};

}  // namespace

PYBIND11_MODULE(locc, m) {
    m.doc() = "LOCC convertibility and volume-based entanglement measures";

    static py::exception<locc::Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const locc::Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            inst.attr("code") = e.code();
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    m.def("canonicalize", [](const std::vector<double>& raw) { return schmidt(raw).vec(); }, py::arg("coefficients"));
    m.def("majorizes", [](const std::vector<double>& a, const std::vector<double>& b) {
        return locc::majorizes(schmidt(a), schmidt(b));
    }, py::arg("a"), py::arg("b"), "True when b is majorized by a, i.e. b converts to a.");
    m.def("source_volume", [](const std::vector<double>& l) { return locc::source_volume(schmidt(l)); }, py::arg("schmidt"));
    m.def("accessible_volume", [](const std::vector<double>& l) { return locc::accessible_volume(schmidt(l)).volume; },
          py::arg("schmidt"));
    m.def("source_entanglement", [](const std::vector<double>& l, std::optional<int> k) {
        const auto s = schmidt(l);
        return report(k ? locc::source_entanglement_k(s, *k) : locc::source_entanglement(s));
    }, py::arg("schmidt"), py::arg("k") = py::none());
    m.def("accessible_entanglement", [](const std::vector<double>& l, std::optional<int> k) {
        const auto s = schmidt(l);
        return report(k ? locc::accessible_entanglement_k(s, *k) : locc::accessible_entanglement(s));
    }, py::arg("schmidt"), py::arg("k") = py::none());
    m.def("accessible_vertices", [](const std::vector<double>& l) {
        const auto s = schmidt(l);
        std::vector<std::vector<double>> out;
        for (const auto& v : locc::enumerate_vertices(locc::accessible_hrep(s)).vertices) {
            const auto full = locc::lift(v);
            out.emplace_back(full.data(), full.data() + full.size());
        }
        return out;
    }, py::arg("schmidt"));
    m.def("mc_source_volume", [](const std::vector<double>& l, std::uint64_t samples, std::uint64_t seed, int threads) {
        return estimate(locc::mc_source_volume(schmidt(l), mc(samples, seed, threads)));
    }, py::arg("schmidt"), py::arg("samples") = 1'000'000, py::arg("seed") = locc::kDefaultMcSeed, py::arg("threads") = 0);
    m.def("mc_accessible_volume", [](const std::vector<double>& l, std::uint64_t samples, std::uint64_t seed, int threads) {
        return estimate(locc::mc_accessible_volume(schmidt(l), mc(samples, seed, threads)));
    }, py::arg("schmidt"), py::arg("samples") = 1'000'000, py::arg("seed") = locc::kDefaultMcSeed, py::arg("threads") = 0);

    m.attr("REFERENCE_SEED") = kReferenceSeed;

    m.def("classify", [](const Gammas& gammas, const SeedTuple& seed) {
        const auto f = make_form(gammas, seed);
        py::dict d;
        d["structure"] = fq::to_string(f.tag);
        d["axis"] = f.axis ? py::cast(fq::to_string(*f.axis)) : py::none();
        d["second_axis"] = f.second_axis ? py::cast(fq::to_string(*f.second_axis)) : py::none();
        std::vector<int> parties;
        for (int s : f.slots) parties.push_back(s + 1);
        d["parties"] = parties;
        d["gammas"] = f.gammas;
        d["diagnostics"] = f.diagnostics;
        return d;
    }, py::arg("gammas"), py::arg("seed") = kReferenceSeed);
    m.def("can_convert", [](const Gammas& from, const Gammas& to, const SeedTuple& seed) {
        const auto c = fq::can_convert(make_form(from, seed), make_form(to, seed));
        return py::make_tuple(c.possible, c.row ? py::cast(fq::to_string(*c.row)) : py::none());
    }, py::arg("initial"), py::arg("final"), py::arg("seed") = kReferenceSeed);
    m.def("fourqubit_measures", [](const Gammas& gammas, const SeedTuple& seed, std::uint64_t samples, std::uint64_t mc_seed) {
        const auto pair = fq::entanglement_4q(make_form(gammas, seed), mc(samples, mc_seed, 0));
        return py::make_tuple(report(pair.source), report(pair.accessible));
    }, py::arg("gammas"), py::arg("seed") = kReferenceSeed, py::arg("mc_samples") = fq::kDefaultCaseIIISamples,
       py::arg("mc_seed") = locc::kDefaultMcSeed);
    m.def("povm_witness", [](const Gammas& from, const Gammas& to, const SeedTuple& seed) {
        const auto w = fq::povm_witness(make_form(from, seed), make_form(to, seed));
        py::dict d;
        d["row"] = fq::to_string(w.row);
        std::vector<double> weights, probabilities;
        for (const auto& o : w.outcomes) {
            weights.push_back(o.weight);
            probabilities.push_back(o.probability);
        }
        d["weights"] = weights;
        d["probabilities"] = probabilities;
        d["completeness_error"] = w.completeness_error;
        d["state_error"] = w.state_error;
        return d;
    }, py::arg("initial"), py::arg("final"), py::arg("seed") = kReferenceSeed);
}
