#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "locc/fourqubit.hpp"
#include "locc/schmidt.hpp"

namespace gen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>()(rng_); }

    // Uniform on the simplex, components bounded away from ties.
    std::vector<double> simplex(int d) {
        for (;;) {
            std::vector<double> x(static_cast<std::size_t>(d));
            double s = 0.0;
            for (double& v : x) s += v = -std::log(1.0 - uniform());
            for (double& v : x) v /= s;
            std::sort(x.begin(), x.end(), std::greater<>());
            bool spread = true;
            for (int i = 0; i + 1 < d; ++i)
                if (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i + 1)] < 1e-3) spread = false;
            if (spread) return x;
        }
    }

    locc::SchmidtVector schmidt(int d) { return locc::SchmidtVector::canonicalize(simplex(d)); }

    // At least one repeated coefficient.
    locc::SchmidtVector degenerate_schmidt(int d) {
        auto x = simplex(d);
        const int i = integer(0, d - 2);
        const double avg = 0.5 * (x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(i + 1)]);
        x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 1)] = avg;
        return locc::SchmidtVector::canonicalize(x);
    }

    // A vector majorized by lambda: random Robin Hood transfers and a mix toward uniform.
    locc::SchmidtVector majorized_by(const locc::SchmidtVector& lambda) {
        auto x = lambda.vec();
        const int d = lambda.dim();
        for (int r = 0; r < 3; ++r) {
            const int i = integer(0, d - 1), j = integer(0, d - 1);
            if (i == j) continue;
            const double t = uniform(0.0, 0.5);
            const double a = x[static_cast<std::size_t>(i)], b = x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] = (1 - t) * a + t * b;
            x[static_cast<std::size_t>(j)] = t * a + (1 - t) * b;
        }
        const double mix = uniform(0.0, 0.3);
        for (double& v : x) v = (1 - mix) * v + mix / d;
        return locc::SchmidtVector::canonicalize(x);
    }

    locc::fourqubit::ParamVector direction() {
        for (;;) {
            locc::fourqubit::ParamVector v{normal(), normal(), normal()};
            const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
        }
    }

    // |gamma| uniform in [lo, hi], every component at least min_abs in magnitude.
    locc::fourqubit::ParamVector gamma(double lo, double hi, double min_abs = 0.01) {
        for (;;) {
            const auto u = direction();
            const double r = uniform(lo, hi);
            locc::fourqubit::ParamVector g{r * u[0], r * u[1], r * u[2]};
            if (std::all_of(g.begin(), g.end(), [&](double x) { return std::abs(x) >= min_abs; })) return g;
        }
    }

    locc::fourqubit::SeedParams seed() {
        for (;;) {
            locc::fourqubit::SeedParams p;
            p.a = uniform(0.1, 1.0);
            p.b = {normal(), normal()};
            p.c = {normal(), normal()};
            p.d = {normal(), normal()};
            const double n = std::sqrt(p.a * p.a + std::norm(p.b) + std::norm(p.c) + std::norm(p.d));
            p.a /= n;
            p.b /= n;
            p.c /= n;
            p.d /= n;
            try {
                locc::fourqubit::validate_seed(p);
                return p;
            } catch (const std::exception&) {
            }
        }
    }

private:
    std::mt19937_64 rng_;
};

inline locc::fourqubit::SeedParams reference_seed() {
    locc::fourqubit::SeedParams p;
    p.a = 0.6;
    p.b = {0.5, 0.1};
    p.c = {0.3, -0.2};
    p.d = {std::sqrt(1.0 - 0.36 - 0.26 - 0.13), 0.0};
    return p;
}

inline locc::fourqubit::FourQubitForm form(const std::array<locc::fourqubit::ParamVector, 4>& g,
                                           const locc::fourqubit::SeedParams& s = reference_seed()) {
    locc::fourqubit::FourQubitForm f;
    f.seed = s;
    f.gammas = g;
    return locc::fourqubit::classify(locc::fourqubit::standard_form(f));
}


struct Pair {
    locc::fourqubit::FourQubitForm initial;
    locc::fourqubit::FourQubitForm final_state;
};

// Convertible pairs for one conversion row, both ends of equal volume dimension.
class PairGen {
public:
    using Row = locc::fourqubit::Row;
    using PV = locc::fourqubit::ParamVector;

    explicit PairGen(std::uint64_t seed) : g_(seed) {}

    Pair make(Row row) {
        switch (row) {
            case Row::Ia: return ia();
            case Row::II: return ii();
            case Row::IIIa: return iiia();
            case Row::IIIb: return iiib();
            default: return iiic();
        }
    }

    Gen& gen() { return g_; }

private:
    double signed_mag(double lo, double hi) { return (g_.uniform() < 0.5 ? -1.0 : 1.0) * g_.uniform(lo, hi); }

    std::array<PV, 4> place(const std::vector<std::pair<int, PV>>& parts, const std::array<int, 4>& perm) {
        std::array<PV, 4> out{};
        for (const auto& [slot, v] : parts) out[static_cast<std::size_t>(perm[static_cast<std::size_t>(slot)])] = v;
        return out;
    }

    std::array<int, 4> perm() {
        std::array<int, 4> p{0, 1, 2, 3};
        std::shuffle(p.begin(), p.end(), rng_);
        return p;
    }

    Pair ia() {
        const int w = g_.integer(0, 2);
        const int t1 = (w + 1) % 3, t2 = (w + 2) % 3;
        PV zeta{};
        zeta[static_cast<std::size_t>(w)] = signed_mag(0.02, 0.3);
        zeta[static_cast<std::size_t>(t1)] = signed_mag(0.02, 0.25);
        zeta[static_cast<std::size_t>(t2)] = signed_mag(0.02, 0.25);
        while (zeta[0] * zeta[0] + zeta[1] * zeta[1] + zeta[2] * zeta[2] > 0.24) {
            zeta[static_cast<std::size_t>(t1)] *= 0.8;
            zeta[static_cast<std::size_t>(t2)] *= 0.8;
        }
        const double s = g_.uniform(0.05, 1.0);
        PV gamma = zeta;
        gamma[static_cast<std::size_t>(t1)] *= s;
        gamma[static_cast<std::size_t>(t2)] *= s;
        PV a{}, b{};
        a[static_cast<std::size_t>(w)] = signed_mag(0.02, 0.45);
        b[static_cast<std::size_t>(w)] = g_.uniform() < 0.5 ? 0.0 : signed_mag(0.02, 0.45);
        const auto p = perm();
        const auto seed = g_.seed();
        return {form(place({{0, gamma}, {1, a}, {2, b}}, p), seed), form(place({{0, zeta}, {1, a}, {2, b}}, p), seed)};
    }

    Pair ii() {
        const int v = g_.integer(0, 2);
        const int w = (v + g_.integer(1, 2)) % 3;
        PV zi{}, zj{}, gi{}, gj{};
        zi[static_cast<std::size_t>(v)] = signed_mag(0.02, 0.45);
        zj[static_cast<std::size_t>(w)] = signed_mag(0.02, 0.45);
        gi[static_cast<std::size_t>(v)] = zi[static_cast<std::size_t>(v)] * g_.uniform(0.05, 1.0);
        gj[static_cast<std::size_t>(w)] = zj[static_cast<std::size_t>(w)] * g_.uniform(0.05, 1.0);
        const auto p = perm();
        const auto seed = g_.seed();
        return {form(place({{0, gi}, {1, gj}}, p), seed), form(place({{0, zi}, {1, zj}}, p), seed)};
    }

    // eta drawn from the tetrahedron of admissible weights.
    PV tetra_eta() {
        static constexpr std::array<PV, 4> corners{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
        std::array<double, 4> w{};
        double s = 0.0;
        for (double& x : w) s += x = -std::log(1.0 - g_.uniform());
        PV eta{};
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t c = 0; c < 3; ++c) eta[c] += w[k] / s * corners[k][c];
        return eta;
    }

    Pair iiia() {
        for (;;) {
            const PV zeta = g_.gamma(0.05, 0.45, 0.02);
            const PV eta = tetra_eta();
            PV gamma{};
            for (std::size_t c = 0; c < 3; ++c) gamma[c] = eta[c] * zeta[c];
            if (std::any_of(gamma.begin(), gamma.end(), [](double x) { return std::abs(x) < 1e-3; })) continue;
            const int party = g_.integer(0, 3);
            const auto seed = g_.seed();
            std::array<PV, 4> gi{}, zf{};
            gi[static_cast<std::size_t>(party)] = gamma;
            zf[static_cast<std::size_t>(party)] = zeta;
            return {form(gi, seed), form(zf, seed)};
        }
    }

    Pair iiib() {
        const int off = g_.integer(0, 2);
        PV zeta{}, gamma{};
        for (int c = 0; c < 3; ++c) {
            if (c == off) continue;
            zeta[static_cast<std::size_t>(c)] = signed_mag(0.02, 0.33);
        }
        // |eta_a| + |eta_b| <= 1 keeps the missing ratio admissible.
        const double ea = g_.uniform(0.02, 0.95);
        const double eb = (g_.uniform() < 0.5 ? -1.0 : 1.0) * g_.uniform(0.02, 1.0 - ea);
        int used = 0;
        for (int c = 0; c < 3; ++c) {
            if (c == off) continue;
            gamma[static_cast<std::size_t>(c)] = zeta[static_cast<std::size_t>(c)] * (used++ == 0 ? ea : eb);
        }
        const int party = g_.integer(0, 3);
        const auto seed = g_.seed();
        std::array<PV, 4> gi{}, zf{};
        gi[static_cast<std::size_t>(party)] = gamma;
        zf[static_cast<std::size_t>(party)] = zeta;
        return {form(gi, seed), form(zf, seed)};
    }

    Pair iiic() {
        const int axis = g_.integer(0, 2);
        PV zeta{}, gamma{};
        zeta[static_cast<std::size_t>(axis)] = signed_mag(0.02, 0.45);
        gamma[static_cast<std::size_t>(axis)] = zeta[static_cast<std::size_t>(axis)] * g_.uniform(-1.0, 1.0);
        if (std::abs(gamma[static_cast<std::size_t>(axis)]) < 1e-3) gamma[static_cast<std::size_t>(axis)] = 1e-3;
        const int party = g_.integer(0, 3);
        const auto seed = g_.seed();
        std::array<PV, 4> gi{}, zf{};
        gi[static_cast<std::size_t>(party)] = gamma;
        zf[static_cast<std::size_t>(party)] = zeta;
        return {form(gi, seed), form(zf, seed)};
    }

    Gen g_;
    std::mt19937_64 rng_{12345};
};

}  // namespace gen
