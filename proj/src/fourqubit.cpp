#include "locc/fourqubit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "locc/error.hpp"

namespace locc::fourqubit {

namespace {

constexpr double kSeedTol = 1e-12;
constexpr double kWeightFloor = 1e-15;

double norm3(const ParamVector& g) { return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]); }

bool is_zero(const ParamVector& g) {
    return std::all_of(g.begin(), g.end(), [](double x) { return std::abs(x) < kClassifyTol; });
}

std::vector<int> support(const ParamVector& g) {
    std::vector<int> s;
    for (int k = 0; k < 3; ++k)
        if (std::abs(g[static_cast<std::size_t>(k)]) >= kClassifyTol) s.push_back(k);
    return s;
}

// Components other than w.
std::array<double, 2> transverse(const ParamVector& g, Axis w) {
    const int k = static_cast<int>(w);
    return {g[static_cast<std::size_t>((k + 1) % 3)], g[static_cast<std::size_t>((k + 2) % 3)]};
}

double component(const ParamVector& g, Axis a) { return g[static_cast<std::size_t>(a)]; }

const ParamVector& slot(const FourQubitForm& f, int s) { return f.gammas[static_cast<std::size_t>(f.slots[static_cast<std::size_t>(s)])]; }

void require_classified(const FourQubitForm& f) {
    if (!f.classified) throw Error("fourqubit.UnclassifiedForm", "classify the form first");
}

// Area of {|z1| >= a, |z2| >= b, z1^2 + z2^2 < 1/4} in the quadrant z1, z2 >= 0.
double quadrant_area(double a, double b) {
    const double r2 = 0.25;
    if (a * a + b * b >= r2) return 0.0;
    const auto prim = [&](double x) { return 0.5 * (x * std::sqrt(std::max(0.0, r2 - x * x)) + r2 * std::asin(std::min(1.0, x / 0.5))); };
    const double xmax = std::sqrt(r2 - b * b);
    return prim(xmax) - prim(a) - b * (xmax - a);
}

std::array<double, 2> nonzero_pair(const ParamVector& g) {
    std::array<double, 2> out{};
    int n = 0;
    for (double x : g)
        if (std::abs(x) >= kClassifyTol && n < 2) out[static_cast<std::size_t>(n++)] = std::abs(x);
    return out;
}

bool caseiii_three_dimensional(const ParamVector& g) {
    const auto s = support(g);
    if (s.size() == 3) return true;
    const auto [a, b] = nonzero_pair(g);
    return std::pow(std::pow(a, 2.0 / 3.0) + std::pow(b, 2.0 / 3.0), 1.5) < 0.5;
}

}  // namespace

const char* to_string(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

const char* to_string(Structure s) {
    switch (s) {
        case Structure::Seed: return "Seed";
        case Structure::CaseIII: return "CaseIII";
        case Structure::GxOnly: return "GxOnly";
        case Structure::MESAligned: return "MESAligned";
        case Structure::GenericIa: return "Generic_ia";
        case Structure::CaseII: return "CaseII";
        case Structure::AxisPlusTransverse: return "AxisPlusTransverse";
        case Structure::Isolated: return "Isolated";
    }
    return "?";
}

const char* to_string(Row r) {
    switch (r) {
        case Row::Identity: return "identity";
        case Row::Ia: return "ia";
        case Row::Ib: return "ib";
        case Row::II: return "ii";
        case Row::IIIa: return "iiia";
        case Row::IIIb: return "iiib";
        case Row::IIIc: return "iiic";
    }
    return "?";
}

std::optional<Axis> axis_from_string(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    return std::nullopt;
}

// ---- seed ----

void validate_seed(const SeedParams& p) {
    const auto bad = [](const std::string& what) { throw Error("fourqubit.InvalidSeedParams", what); };
    if (!std::isfinite(p.a) || !std::isfinite(std::abs(p.b)) || !std::isfinite(std::abs(p.c)) ||
        !std::isfinite(std::abs(p.d)))
        bad("non-finite parameter");
    const double n = p.a * p.a + std::norm(p.b) + std::norm(p.c) + std::norm(p.d);
    if (std::abs(n - 1.0) > kEpsNorm) bad("a^2 + |b|^2 + |c|^2 + |d|^2 = " + std::to_string(n) + ", expected 1");
    const std::array<Complex, 4> sq{Complex(p.a * p.a), p.b * p.b, p.c * p.c, p.d * p.d};
    const char* names = "abcd";
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(sq[static_cast<std::size_t>(i)] - sq[static_cast<std::size_t>(j)]) <= kSeedTol)
                bad(std::string(1, names[i]) + "^2 equals " + names[j] + "^2");
    // Any scaling q mapping the multiset onto itself sends the first nonzero
    // square to another element, so those ratios are the only candidates.
    int first = 0;
    while (first < 4 && std::abs(sq[static_cast<std::size_t>(first)]) <= kSeedTol) ++first;
    for (int t = 0; t < 4; ++t) {
        if (t == first) continue;
        const Complex q = sq[static_cast<std::size_t>(t)] / sq[static_cast<std::size_t>(first)];
        if (std::abs(q - 1.0) <= kSeedTol) continue;
        std::array<bool, 4> used{};
        bool all = true;
        for (int i = 0; i < 4 && all; ++i) {
            const Complex v = q * sq[static_cast<std::size_t>(i)];
            bool hit = false;
            for (int j = 0; j < 4 && !hit; ++j)
                if (!used[static_cast<std::size_t>(j)] &&
                    std::abs(v - sq[static_cast<std::size_t>(j)]) <= 1e-9 * std::max(1.0, std::abs(v)))
                    used[static_cast<std::size_t>(j)] = hit = true;
            all = hit;
        }
        if (all) bad("squared parameters are invariant under scaling by q = (" + std::to_string(q.real()) + ", " +
                     std::to_string(q.imag()) + ")");
    }
}

State seed_vector(const SeedParams& p) {
    State s = State::Zero();
    const Complex a(p.a);
    s(0b0000) = s(0b1111) = (a + p.d) / 2.0;
    s(0b0011) = s(0b1100) = (a - p.d) / 2.0;
    s(0b0101) = s(0b1010) = (p.b + p.c) / 2.0;
    s(0b0110) = s(0b1001) = (p.b - p.c) / 2.0;
    return s;
}

State build_seed(const SeedParams& p) {
    validate_seed(p);
    State s = seed_vector(p);
    return s / s.norm();
}

bool same_seed_class(const SeedParams& x, const SeedParams& y, double tol) {
    std::array<Complex, 4> sx{Complex(x.a * x.a), x.b * x.b, x.c * x.c, x.d * x.d};
    const std::array<Complex, 4> sy{Complex(y.a * y.a), y.b * y.b, y.c * y.c, y.d * y.d};
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            ok = std::abs(sx[static_cast<std::size_t>(i)] - sy[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]) <= tol;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ---- local operators ----

Mat2 pauli(int k) {
    Mat2 m;
    switch (k) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw Error("fourqubit.InvalidPauli", "pauli index " + std::to_string(k));
    }
    return m;
}

Mat2 local_operator(const ParamVector& gamma) {
    const double n = norm3(gamma);
    if (n > kMaxNorm) throw Error("fourqubit.InvalidParams", "|gamma| must stay below 1/2");
    Mat2 g = 0.5 * pauli(0);
    for (int k = 0; k < 3; ++k) g += gamma[static_cast<std::size_t>(k)] * pauli(k + 1);
    const double root_det = std::sqrt(0.25 - n * n);
    return (g + root_det * pauli(0)) / std::sqrt(1.0 + 2.0 * root_det);
}

State apply_local(const LocalOp& op, const State& psi) {
    State out = psi;
    for (int p = 0; p < 4; ++p) {
        const int bit = 1 << (3 - p);
        const Mat2& m = op[static_cast<std::size_t>(p)];
        for (int i = 0; i < 16; ++i) {
            if (i & bit) continue;
            const Complex x0 = out(i), x1 = out(i | bit);
            out(i) = m(0, 0) * x0 + m(0, 1) * x1;
            out(i | bit) = m(1, 0) * x0 + m(1, 1) * x1;
        }
    }
    return out;
}

State form_state(const FourQubitForm& form) {
    LocalOp g;
    for (int p = 0; p < 4; ++p) g[static_cast<std::size_t>(p)] = local_operator(form.gammas[static_cast<std::size_t>(p)]);
    State s = apply_local(g, seed_vector(form.seed));
    return s / s.norm();
}

// ---- standard form and classification ----

void validate_gammas(const std::array<ParamVector, 4>& gammas) {
    for (int p = 0; p < 4; ++p) {
        const auto& g = gammas[static_cast<std::size_t>(p)];
        if (!std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); }))
            throw Error("fourqubit.InvalidParams", "party " + std::to_string(p + 1) + " has a non-finite parameter");
        if (norm3(g) > kMaxNorm)
            throw Error("fourqubit.InvalidParams",
                        "party " + std::to_string(p + 1) + " has |gamma| = " + std::to_string(norm3(g)) + " >= 1/2");
    }
}

std::array<ParamVector, 4> apply_sign_pattern(const std::array<ParamVector, 4>& gammas, int pattern) {
    static constexpr std::array<std::array<double, 3>, 4> signs{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
    if (pattern < 0 || pattern > 3) throw Error("fourqubit.InvalidPattern", "sign pattern must be 0..3");
    auto out = gammas;
    for (auto& g : out)
        for (int k = 0; k < 3; ++k) {
            double& x = g[static_cast<std::size_t>(k)];
            x *= signs[static_cast<std::size_t>(pattern)][static_cast<std::size_t>(k)];
            if (x == 0.0) x = 0.0;
        }
    return out;
}

FourQubitForm standard_form(const FourQubitForm& form) {
    const auto greater = [](const std::array<ParamVector, 4>& x, const std::array<ParamVector, 4>& y) {
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t k = 0; k < 3; ++k) {
                const double d = x[p][k] - y[p][k];
                if (std::abs(d) > kEpsNorm) return d > 0;
            }
        return false;
    };
    auto best = apply_sign_pattern(form.gammas, 0);
    for (int pattern = 1; pattern < 4; ++pattern) {
        auto cand = apply_sign_pattern(form.gammas, pattern);
        if (greater(cand, best)) best = cand;
    }
    FourQubitForm out = form;
    out.gammas = best;
    return out;
}

bool lu_identical(const FourQubitForm& x, const FourQubitForm& y, double tol) {
    if (!same_seed_class(x.seed, y.seed)) return false;
    const auto sx = standard_form(x).gammas;
    const auto sy = standard_form(y).gammas;
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t k = 0; k < 3; ++k)
            if (std::abs(sx[p][k] - sy[p][k]) > tol) return false;
    return true;
}

FourQubitForm classify(const FourQubitForm& form) {
    validate_gammas(form.gammas);
    FourQubitForm out = form;
    out.classified = true;
    out.axis.reset();
    out.second_axis.reset();
    out.diagnostics.clear();
    out.slots = {0, 1, 2, 3};

    std::vector<int> nonzero, general, aligned, zero;
    std::array<std::vector<int>, 4> supp;
    for (int p = 0; p < 4; ++p) {
        const auto& g = form.gammas[static_cast<std::size_t>(p)];
        supp[static_cast<std::size_t>(p)] = support(g);
        const auto& s = supp[static_cast<std::size_t>(p)];
        if (s.empty()) zero.push_back(p);
        else nonzero.push_back(p);
        if (s.size() == 1) aligned.push_back(p);
        if (s.size() >= 2) {
            general.push_back(p);
            for (int k : s)
                if (std::abs(g[static_cast<std::size_t>(k)]) < kNearMissTol)
                    out.diagnostics.push_back("party " + std::to_string(p + 1) + " component " + std::to_string(k + 1) +
                                              " is " + std::to_string(g[static_cast<std::size_t>(k)]) +
                                              ": nearly axis-aligned but treated as general");
        }
    }
    const auto axis_of = [&](int p) { return static_cast<Axis>(supp[static_cast<std::size_t>(p)].front()); };
    const auto set_slots = [&](std::vector<int> order) {
        for (int p = 0; p < 4; ++p)
            if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);
        std::copy(order.begin(), order.end(), out.slots.begin());
    };

    if (nonzero.empty()) {
        out.tag = Structure::Seed;
        return out;
    }
    if (nonzero.size() == 1) {
        const int i = nonzero.front();
        if (aligned.size() == 1) {
            out.tag = Structure::GxOnly;
            out.axis = axis_of(i);
        } else {
            out.tag = Structure::CaseIII;
        }
        set_slots({i});
        return out;
    }
    if (general.size() >= 2) {
        out.tag = Structure::Isolated;
        return out;
    }
    if (general.empty()) {
        const Axis w = axis_of(aligned.front());
        const bool same = std::all_of(aligned.begin(), aligned.end(), [&](int p) { return axis_of(p) == w; });
        if (same) {
            out.tag = Structure::MESAligned;
            out.axis = w;
        } else if (nonzero.size() == 2) {
            out.tag = Structure::CaseII;
            out.second_axis = axis_of(nonzero[0]);
            out.axis = axis_of(nonzero[1]);
            set_slots({nonzero[0], nonzero[1]});
        } else {
            out.tag = Structure::Isolated;
            out.diagnostics.push_back("aligned parties use three different axes or more than two parties differ");
        }
        return out;
    }
    const int j = general.front();
    const Axis w = axis_of(aligned.front());
    if (!std::all_of(aligned.begin(), aligned.end(), [&](int p) { return axis_of(p) == w; })) {
        out.tag = Structure::Isolated;
        out.diagnostics.push_back("aligned parties do not share one axis");
        return out;
    }
    const bool general_on_w = std::abs(component(form.gammas[static_cast<std::size_t>(j)], w)) >= kClassifyTol;
    const std::size_t on_w = aligned.size() + (general_on_w ? 1 : 0);
    out.axis = w;
    if (on_w >= 2) {
        out.tag = Structure::GenericIa;
        std::vector<int> order{j};
        order.insert(order.end(), aligned.begin(), aligned.end());
        set_slots(order);
    } else {
        out.tag = Structure::AxisPlusTransverse;
        set_slots({aligned.front(), j});
    }
    return out;
}

// ---- conversion ----

std::optional<ParamVector> feasible_eta(const ParamVector& gamma, const ParamVector& zeta, double tol) {
    ParamVector eta{0.0, 0.0, 0.0};
    std::vector<int> fixed, free;
    for (int k = 0; k < 3; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        if (std::abs(zeta[uk]) < tol) {
            if (std::abs(gamma[uk]) >= tol) return std::nullopt;
            free.push_back(k);
        } else {
            eta[uk] = gamma[uk] / zeta[uk];
            fixed.push_back(k);
        }
    }
    if (fixed.size() == 3) {
        const double r1 = eta[0], r2 = eta[1], r3 = eta[2];
        for (double p : {1 + r1 + r2 + r3, 1 + r1 - r2 - r3, 1 - r1 + r2 - r3, 1 - r1 - r2 + r3})
            if (p < -tol) return std::nullopt;
        return eta;
    }
    for (int k : fixed)
        if (std::abs(eta[static_cast<std::size_t>(k)]) > 1.0 + tol) return std::nullopt;
    if (fixed.size() == 2) {
        const double ra = eta[static_cast<std::size_t>(fixed[0])], rb = eta[static_cast<std::size_t>(fixed[1])];
        const double lo = -1.0 + std::abs(ra + rb), hi = 1.0 - std::abs(ra - rb);
        eta[static_cast<std::size_t>(free.front())] = 0.5 * (lo + hi);
    }
    return eta;
}

namespace {

bool others_zero(const FourQubitForm& f, std::initializer_list<int> keep) {
    for (int p = 0; p < 4; ++p)
        if (std::find(keep.begin(), keep.end(), p) == keep.end() && !is_zero(f.gammas[static_cast<std::size_t>(p)]))
            return false;
    return true;
}

bool only_on(const ParamVector& g, Axis a) {
    const auto t = transverse(g, a);
    return std::abs(t[0]) < kClassifyTol && std::abs(t[1]) < kClassifyTol;
}

struct IaMatch {
    int pattern = 0;
    double s = 0.0;
};

// Same w-components everywhere and a shrunken transverse part at the general party.
std::optional<IaMatch> match_ia(const FourQubitForm& init, const FourQubitForm& fin, int general) {
    const Axis w = *fin.axis;
    for (int pattern = 0; pattern < 4; ++pattern) {
        const auto z = apply_sign_pattern(fin.gammas, pattern);
        bool ok = true;
        for (int p = 0; p < 4 && ok; ++p) {
            const auto& g = init.gammas[static_cast<std::size_t>(p)];
            const auto& zp = z[static_cast<std::size_t>(p)];
            ok = std::abs(component(g, w) - component(zp, w)) <= kClassifyTol;
            if (ok && p != general) ok = only_on(g, w);
        }
        if (!ok) continue;
        const auto gt = transverse(init.gammas[static_cast<std::size_t>(general)], w);
        const auto zt = transverse(z[static_cast<std::size_t>(general)], w);
        const double zz = zt[0] * zt[0] + zt[1] * zt[1];
        double s = 0.0;
        if (zz < kClassifyTol * kClassifyTol) {
            if (std::hypot(gt[0], gt[1]) >= kClassifyTol) continue;
        } else {
            s = (gt[0] * zt[0] + gt[1] * zt[1]) / zz;
            if (std::hypot(gt[0] - s * zt[0], gt[1] - s * zt[1]) > kClassifyTol) continue;
            if (s < -kClassifyTol || s > 1.0 + kClassifyTol) continue;
        }
        return IaMatch{pattern, std::clamp(s, 0.0, 1.0)};
    }
    return std::nullopt;
}

bool match_ib(const FourQubitForm& init, const FourQubitForm& fin) {
    const int i = fin.slots[0];
    const Axis w = *fin.axis;
    const auto& g = init.gammas[static_cast<std::size_t>(i)];
    return others_zero(init, {i}) && only_on(g, w) &&
           std::abs(component(g, w)) <= std::abs(component(slot(fin, 0), w)) + kClassifyTol;
}

bool match_ii(const FourQubitForm& init, const FourQubitForm& fin) {
    const int i = fin.slots[0], j = fin.slots[1];
    const Axis v = *fin.second_axis, w = *fin.axis;
    const auto& gi = init.gammas[static_cast<std::size_t>(i)];
    const auto& gj = init.gammas[static_cast<std::size_t>(j)];
    return others_zero(init, {i, j}) && only_on(gi, v) && only_on(gj, w) &&
           std::abs(component(gi, v)) <= std::abs(component(slot(fin, 0), v)) + kClassifyTol &&
           std::abs(component(gj, w)) <= std::abs(component(slot(fin, 1), w)) + kClassifyTol;
}

Row iii_row(const ParamVector& zeta) {
    switch (support(zeta).size()) {
        case 3: return Row::IIIa;
        case 2: return Row::IIIb;
        default: return Row::IIIc;
    }
}

}  // namespace

Conversion can_convert(const FourQubitForm& initial, const FourQubitForm& final_state) {
    if (!same_seed_class(initial.seed, final_state.seed))
        throw Error("fourqubit.DifferentSLOCCClass", "seed parameters belong to different SLOCC classes");
    const auto init = classify(initial);
    const auto fin = classify(final_state);
    if (lu_identical(init, fin)) return {true, Row::Identity, "states are LU-equivalent"};
    switch (fin.tag) {
        case Structure::Seed:
        case Structure::MESAligned:
        case Structure::Isolated:
            return {false, std::nullopt, std::string(to_string(fin.tag)) + " states are not reachable"};
        case Structure::CaseIII:
        case Structure::GxOnly: {
            const int p = fin.slots[0];
            if (!others_zero(init, {p})) return {false, std::nullopt, "initial state acts on other parties"};
            const auto& zeta = slot(fin, 0);
            if (!feasible_eta(init.gammas[static_cast<std::size_t>(p)], zeta))
                return {false, std::nullopt, "no valid outcome weights for the ratios gamma/zeta"};
            return {true, iii_row(zeta), ""};
        }
        case Structure::CaseII:
            if (match_ii(init, fin)) return {true, Row::II, ""};
            return {false, std::nullopt, "case ii conditions fail"};
        case Structure::GenericIa:
            if (match_ia(init, fin, fin.slots[0])) return {true, Row::Ia, ""};
            return {false, std::nullopt, "case ia conditions fail"};
        case Structure::AxisPlusTransverse:
            if (match_ia(init, fin, fin.slots[1])) return {true, Row::Ia, ""};
            if (match_ib(init, fin)) return {true, Row::Ib, ""};
            return {false, std::nullopt, "case ib conditions fail"};
    }
    return {false, std::nullopt, "unhandled structure"};
}

// ---- volumes ----

bool caseiii_accessible(const ParamVector& gamma, const Eigen::VectorXd& zeta) {
    if (zeta.squaredNorm() >= 0.25) return false;
    return feasible_eta(gamma, {zeta(0), zeta(1), zeta(2)}).has_value();
}

VolumeValue source_volume_4q(const FourQubitForm& form) {
    require_classified(form);
    const auto& g0 = slot(form, 0);
    switch (form.tag) {
        case Structure::Seed:
        case Structure::MESAligned:
        case Structure::Isolated: return {0, 0.0, std::nullopt};
        case Structure::GenericIa: {
            const auto t = transverse(g0, *form.axis);
            return {1, std::hypot(t[0], t[1]), std::nullopt};
        }
        case Structure::CaseII:
            return {2, 4.0 * std::abs(component(g0, *form.second_axis)) * std::abs(component(slot(form, 1), *form.axis)),
                    std::nullopt};
        case Structure::CaseIII:
            if (support(g0).size() == 3) return {3, 2.0 / 3.0 * std::abs(g0[0] * g0[1] * g0[2]), std::nullopt};
            else {
                const auto [a, b] = nonzero_pair(g0);
                return {2, a * b, std::nullopt};
            }
        case Structure::GxOnly: return {1, std::abs(component(g0, *form.axis)), std::nullopt};
        case Structure::AxisPlusTransverse: {
            const auto t = transverse(slot(form, 1), *form.axis);
            return {1, std::abs(component(g0, *form.axis)) + std::hypot(t[0], t[1]), std::nullopt};
        }
    }
    return {};
}

VolumeValue accessible_volume_4q(const FourQubitForm& form, const McConfig& mc) {
    require_classified(form);
    const auto& g0 = slot(form, 0);
    switch (form.tag) {
        case Structure::Seed: return {3, 29.0 * kPi / 12.0, std::nullopt};
        case Structure::Isolated: return {0, 0.0, std::nullopt};
        case Structure::MESAligned: {
            double sum = 0.0;
            for (const auto& g : form.gammas) sum += 0.25 - component(g, *form.axis) * component(g, *form.axis);
            return {2, kPi * sum, std::nullopt};
        }
        case Structure::GenericIa: {
            const double gw = component(g0, *form.axis);
            const auto t = transverse(g0, *form.axis);
            return {1, std::sqrt(0.25 - gw * gw) - std::hypot(t[0], t[1]), std::nullopt};
        }
        case Structure::CaseII:
            return {2, (0.5 - std::abs(component(g0, *form.second_axis))) * (0.5 - std::abs(component(slot(form, 1), *form.axis))),
                    std::nullopt};
        case Structure::CaseIII: {
            if (!caseiii_three_dimensional(g0)) {
                const auto [a, b] = nonzero_pair(g0);
                return {2, 2.0 * quadrant_area(a, b), std::nullopt};
            }
            const Box box{Eigen::Vector3d::Constant(-0.5), Eigen::Vector3d::Constant(0.5)};
            const ParamVector gamma = g0;
            const auto est = mc_region_volume([&](const Eigen::VectorXd& z) { return caseiii_accessible(gamma, z); }, box, mc);
            return {3, 0.5 * est.estimate, 0.5 * est.std_error};
        }
        case Structure::GxOnly: {
            const double g = std::abs(component(g0, *form.axis));
            return {3, kPi / 48.0 * (11.0 + 8.0 * g * (g * g - 3.0)), std::nullopt};
        }
        case Structure::AxisPlusTransverse: {
            const auto t = transverse(slot(form, 1), *form.axis);
            return {1, 0.5 - std::hypot(t[0], t[1]), std::nullopt};
        }
    }
    return {};
}

MeasurePair entanglement_4q(const FourQubitForm& form, const McConfig& mc) {
    require_classified(form);
    const auto vs = source_volume_4q(form);
    const auto va = accessible_volume_4q(form, mc);
    struct Sup {
        double value;
        const char* symbol;
    };
    Sup ssup{1.0, "1"}, asup{1.0, "1"};
    switch (form.tag) {
        case Structure::Seed: asup = {29.0 * kPi / 12.0, "29π/12"}; break;
        case Structure::MESAligned: asup = {kPi, "π"}; break;
        case Structure::GenericIa: ssup = {0.5, "1/2"}; asup = {0.5, "1/2"}; break;
        case Structure::CaseII: ssup = {1.0, "1"}; asup = {0.25, "1/4"}; break;
        case Structure::CaseIII:
            ssup = vs.dimension == 3 ? Sup{1.0 / (36.0 * std::sqrt(3.0)), "1/(36√3)"} : Sup{0.125, "1/8"};
            asup = va.dimension == 3 ? Sup{kPi / 12.0, "π/12"} : Sup{kPi / 8.0, "π/8"};
            break;
        case Structure::GxOnly: ssup = {0.5, "1/2"}; asup = {11.0 * kPi / 48.0, "11π/48"}; break;
        case Structure::AxisPlusTransverse: ssup = {1.0, "1"}; asup = {0.5, "1/2"}; break;
        case Structure::Isolated: break;
    }
    MeasurePair out;
    out.source.quantity = Quantity::Source;
    out.source.volume = vs.value;
    out.source.dimension = vs.dimension;
    out.source.sup = ssup.value;
    out.source.sup_symbolic = ssup.symbol;
    out.source.entanglement = vs.dimension == 0 ? 1.0 : 1.0 - vs.value / ssup.value;
    out.accessible.quantity = Quantity::Accessible;
    out.accessible.volume = va.value;
    out.accessible.dimension = va.dimension;
    out.accessible.sup = asup.value;
    out.accessible.sup_symbolic = asup.symbol;
    out.accessible.entanglement = va.value / asup.value;
    out.accessible.std_error = va.std_error;
    return out;
}

// ---- POVM witnesses ----

namespace {

struct Branch {
    LocalOp op;
    double weight;
};

LocalOp identity_op() { return {pauli(0), pauli(0), pauli(0), pauli(0)}; }

// Outcomes k = 0..3: sqrt(p_k) h sigma_k g^-1 at the party, sigma_k elsewhere.
std::vector<Branch> iii_step(int party, const ParamVector& gamma, const ParamVector& zeta, const ParamVector& eta) {
    const Mat2 move = local_operator(zeta);
    const Mat2 undo = local_operator(gamma).inverse();
    const double e1 = eta[0], e2 = eta[1], e3 = eta[2];
    const std::array<double, 4> p{(1 + e1 + e2 + e3) / 4, (1 + e1 - e2 - e3) / 4, (1 - e1 + e2 - e3) / 4,
                                  (1 - e1 - e2 + e3) / 4};
    std::vector<Branch> out;
    for (int k = 0; k < 4; ++k) {
        const double pk = std::max(0.0, p[static_cast<std::size_t>(k)]);
        LocalOp op{pauli(k), pauli(k), pauli(k), pauli(k)};
        op[static_cast<std::size_t>(party)] = std::sqrt(pk) * move * pauli(k) * undo;
        out.push_back({op, pk});
    }
    return out;
}

// Two outcomes: keep, or conjugate the transverse part by sigma_f on every party.
std::vector<Branch> flip_step(int party, const ParamVector& gamma, const ParamVector& zeta, int f, double q) {
    const Mat2 move = local_operator(zeta);
    const Mat2 undo = local_operator(gamma).inverse();
    LocalOp keep = identity_op();
    keep[static_cast<std::size_t>(party)] = std::sqrt(q) * move * undo;
    LocalOp flip{pauli(f), pauli(f), pauli(f), pauli(f)};
    flip[static_cast<std::size_t>(party)] = std::sqrt(1.0 - q) * move * pauli(f) * undo;
    return {{keep, q}, {flip, 1.0 - q}};
}

ParamVector flip_eta(Axis f, double s) {
    ParamVector eta{s, s, s};
    eta[static_cast<std::size_t>(f)] = 1.0;
    return eta;
}

double bloch_residual(int party, const std::vector<Branch>& step, const ParamVector& gamma, const ParamVector& zeta) {
    const Mat2 H = local_operator(zeta).adjoint() * local_operator(zeta);
    const Mat2 G = local_operator(gamma).adjoint() * local_operator(gamma);
    const Mat2 undo_inv = local_operator(gamma);
    Mat2 sum = Mat2::Zero();
    for (const auto& b : step) {
        if (b.weight <= 0.0) continue;
        // Recover S_k = h^-1 M_k g / sqrt(w_k) at the party.
        const Mat2 s = local_operator(zeta).inverse() * b.op[static_cast<std::size_t>(party)] * undo_inv / std::sqrt(b.weight);
        sum += b.weight * s.adjoint() * H * s;
    }
    return (sum - G).cwiseAbs().maxCoeff();
}

Eigen::Matrix<Complex, 16, 16> full_operator(const LocalOp& op) {
    Eigen::Matrix<Complex, 16, 16> m;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            Complex v = 1.0;
            for (int p = 0; p < 4; ++p) {
                const int bit = 3 - p;
                v *= op[static_cast<std::size_t>(p)]((i >> bit) & 1, (j >> bit) & 1);
            }
            m(i, j) = v;
        }
    return m;
}

}  // namespace

PovmWitness povm_witness(const FourQubitForm& initial, const FourQubitForm& final_state) {
    const auto verdict = can_convert(initial, final_state);
    if (!verdict.possible) throw Error("fourqubit.NotConvertible", verdict.reason);
    const auto init = classify(initial);
    auto fin = classify(final_state);

    PovmWitness w;
    w.row = *verdict.row;
    std::vector<std::vector<Branch>> steps;
    auto cur = init.gammas;
    const auto add_step = [&](int party, std::vector<Branch> branches, const ParamVector& zeta, const ParamVector& eta) {
        const auto gamma = cur[static_cast<std::size_t>(party)];
        w.bloch_error = std::max(w.bloch_error, bloch_residual(party, branches, gamma, zeta));
        w.steps.push_back({party, gamma, zeta, eta});
        cur[static_cast<std::size_t>(party)] = zeta;
        steps.push_back(std::move(branches));
    };
    const auto add_iii = [&](int party, const ParamVector& zeta) {
        const auto eta = feasible_eta(cur[static_cast<std::size_t>(party)], zeta);
        if (!eta) throw Error("fourqubit.NotConvertible", "no feasible weights at party " + std::to_string(party + 1));
        add_step(party, iii_step(party, cur[static_cast<std::size_t>(party)], zeta, *eta), zeta, *eta);
    };
    const auto add_flip = [&](int party, const ParamVector& zeta, Axis f, double s) {
        add_step(party, flip_step(party, cur[static_cast<std::size_t>(party)], zeta, static_cast<int>(f) + 1, (1.0 + s) / 2.0),
                 zeta, flip_eta(f, s));
    };
    const auto ratio = [](double num, double den) { return std::abs(den) < kClassifyTol ? 0.0 : num / den; };

    switch (w.row) {
        case Row::Identity:
            for (int pattern = 0; pattern < 4; ++pattern) {
                FourQubitForm cand = fin;
                cand.gammas = apply_sign_pattern(fin.gammas, pattern);
                bool same = true;
                for (std::size_t p = 0; p < 4; ++p)
                    for (std::size_t k = 0; k < 3; ++k)
                        same = same && std::abs(cand.gammas[p][k] - init.gammas[p][k]) <= kEpsNorm;
                if (same) {
                    fin = cand;
                    break;
                }
            }
            steps.push_back({{identity_op(), 1.0}});
            break;
        case Row::IIIa:
        case Row::IIIb:
        case Row::IIIc: add_iii(fin.slots[0], slot(fin, 0)); break;
        case Row::II: {
            const int i = fin.slots[0], j = fin.slots[1];
            const Axis v = *fin.second_axis, ax = *fin.axis;
            const auto zi = slot(fin, 0), zj = slot(fin, 1);
            add_flip(i, zi, ax, ratio(component(cur[static_cast<std::size_t>(i)], v), component(zi, v)));
            add_flip(j, zj, v, ratio(component(cur[static_cast<std::size_t>(j)], ax), component(zj, ax)));
            break;
        }
        case Row::Ia: {
            const int general = fin.tag == Structure::GenericIa ? fin.slots[0] : fin.slots[1];
            const auto m = match_ia(init, fin, general);
            fin.gammas = apply_sign_pattern(fin.gammas, m->pattern);
            add_flip(general, fin.gammas[static_cast<std::size_t>(general)], *fin.axis, m->s);
            break;
        }
        case Row::Ib: {
            const int i = fin.slots[0], j = fin.slots[1];
            add_iii(i, slot(fin, 0));
            add_flip(j, slot(fin, 1), *fin.axis, 0.0);
            break;
        }
    }

    // Compose rounds: later operators act after earlier ones.
    std::vector<Branch> composed{{identity_op(), 1.0}};
    for (const auto& step : steps) {
        std::vector<Branch> next;
        for (const auto& a : composed)
            for (const auto& b : step) {
                if (a.weight * b.weight < kWeightFloor) continue;
                LocalOp op;
                for (std::size_t p = 0; p < 4; ++p) op[p] = b.op[p] * a.op[p];
                next.push_back({op, a.weight * b.weight});
            }
        composed = std::move(next);
    }

    const State psi = form_state(init);
    const State target = form_state(fin);
    Eigen::Matrix<Complex, 16, 16> total = Eigen::Matrix<Complex, 16, 16>::Zero();
    for (const auto& b : composed) {
        const auto m = full_operator(b.op);
        total += m.adjoint() * m;
        const State out = apply_local(b.op, psi);
        const double prob = out.squaredNorm();
        if (prob > 1e-14) {
            const Complex inner = target.dot(out);
            const State aligned = out * (std::conj(inner) / std::abs(inner)) / std::sqrt(prob);
            w.state_error = std::max(w.state_error, (aligned - target).norm());
        }
        w.outcomes.push_back({b.op, b.weight, prob});
    }
    w.completeness_error = (total - Eigen::Matrix<Complex, 16, 16>::Identity()).cwiseAbs().maxCoeff();
    if (w.completeness_error > 1e-12)
        throw Error("fourqubit.CompletenessViolation",
                    "sum of M^+M deviates from identity by " + std::to_string(w.completeness_error));
    if (w.bloch_error > 1e-10 || w.state_error > 1e-9)
        throw Error("fourqubit.WitnessMismatch", "outcome states do not match the target");
    if (!lu_identical(fin, final_state, 1e-9))
        throw Error("fourqubit.CompletenessViolation", "witness target is not LU-equivalent to the final state");
    return w;
}

}  // namespace locc::fourqubit
