#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "locc/measure.hpp"
#include "locc/numeric.hpp"
#include "locc/oracle.hpp"

namespace locc::fourqubit {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using State = Eigen::Matrix<Complex, 16, 1>;
using ParamVector = std::array<double, 3>;
using LocalOp = std::array<Mat2, 4>;

inline constexpr double kClassifyTol = 1e-10;
inline constexpr double kNearMissTol = 1e-6;
inline constexpr double kMaxNorm = 0.5 - 1e-12;
inline constexpr std::uint64_t kDefaultCaseIIISamples = 10'000'000;

enum class Axis { X = 0, Y = 1, Z = 2 };

enum class Structure { Seed, CaseIII, GxOnly, MESAligned, GenericIa, CaseII, AxisPlusTransverse, Isolated };

enum class Row { Identity, Ia, Ib, II, IIIa, IIIb, IIIc };

const char* to_string(Axis a);
const char* to_string(Structure s);
const char* to_string(Row r);
std::optional<Axis> axis_from_string(const std::string& s);

struct SeedParams {
    double a = 0.0;
    Complex b, c, d;
};

// Throws fourqubit.InvalidSeedParams naming the violated condition.
void validate_seed(const SeedParams& p);

// Amplitudes of the seed state without any check on the parameters.
State seed_vector(const SeedParams& p);
// Validates, then returns the normalised seed state.
State build_seed(const SeedParams& p);

// Same SLOCC class: the multisets of squared parameters agree.
bool same_seed_class(const SeedParams& x, const SeedParams& y, double tol = 1e-9);

struct FourQubitForm {
    SeedParams seed;
    std::array<ParamVector, 4> gammas{};

    // Filled by classify. slots[s] is the original party label (0-based) that
    // plays role s in the structure; axis is w, second_axis is v for CaseII.
    Structure tag = Structure::Isolated;
    std::optional<Axis> axis;
    std::optional<Axis> second_axis;
    std::array<int, 4> slots{0, 1, 2, 3};
    std::vector<std::string> diagnostics;
    bool classified = false;
};

// Throws fourqubit.InvalidParams if some |gamma| exceeds 1/2 - 1e-12.
void validate_gammas(const std::array<ParamVector, 4>& gammas);

// The four sign patterns reachable by sigma_k^{x4}: identity, then flips of
// (y,z), (x,z), (x,y).
std::array<ParamVector, 4> apply_sign_pattern(const std::array<ParamVector, 4>& gammas, int pattern);

// Picks the lexicographically largest sign pattern over parties 1..4.
FourQubitForm standard_form(const FourQubitForm& form);

bool lu_identical(const FourQubitForm& x, const FourQubitForm& y, double tol = kEpsNorm);

FourQubitForm classify(const FourQubitForm& form);

struct Conversion {
    bool possible = false;
    std::optional<Row> row;
    std::string reason;
};

// Throws fourqubit.DifferentSLOCCClass when the seeds differ.
Conversion can_convert(const FourQubitForm& initial, const FourQubitForm& final_state);

// eta with eta_k * zeta_k = gamma_k and all four weights p_k >= 0, if one exists.
std::optional<ParamVector> feasible_eta(const ParamVector& gamma, const ParamVector& zeta, double tol = kClassifyTol);

struct VolumeValue {
    int dimension = 0;
    double value = 0.0;
    std::optional<double> std_error;
};

VolumeValue source_volume_4q(const FourQubitForm& form);
VolumeValue accessible_volume_4q(const FourQubitForm& form, const McConfig& mc = McConfig{kDefaultCaseIIISamples});

struct MeasurePair {
    MeasureReport source;
    MeasureReport accessible;
};

MeasurePair entanglement_4q(const FourQubitForm& form, const McConfig& mc = McConfig{kDefaultCaseIIISamples});

// Region whose half-volume is the CaseIII accessible volume of gamma; exposed
// for the oracle front end.
bool caseiii_accessible(const ParamVector& gamma, const Eigen::VectorXd& zeta);

// Local positive square root g of G = 1/2 + gamma.sigma.
Mat2 local_operator(const ParamVector& gamma);
Mat2 pauli(int k);

// Normalised (g1 x g2 x g3 x g4)|seed>.
State form_state(const FourQubitForm& form);
State apply_local(const LocalOp& op, const State& psi);

struct PovmOutcome {
    LocalOp op;
    double weight = 0.0;       // designed weight of the outcome
    double probability = 0.0;  // |M psi|^2 on the normalised initial state
};

// One local round: party (original label) moved from gamma to zeta with
// eta * zeta = gamma componentwise.
struct Step {
    int party = 0;
    ParamVector gamma{};
    ParamVector zeta{};
    ParamVector eta{};
};

struct PovmWitness {
    Row row = Row::Identity;
    std::vector<PovmOutcome> outcomes;
    std::vector<Step> steps;
    double completeness_error = 0.0;
    double bloch_error = 0.0;  // max |sum_k w_k S_k^+ H S_k - G| over steps
    double state_error = 0.0;  // worst phase-aligned distance to the target state
};

// Throws fourqubit.NotConvertible or fourqubit.CompletenessViolation.
PovmWitness povm_witness(const FourQubitForm& initial, const FourQubitForm& final_state);

}  // namespace locc::fourqubit
