#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace locc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

inline constexpr const char* kSeedEnv = "LOCC_MC_SEED";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip text of x rounded to 12 significant digits.
double round12(double x);

// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace locc::cli
