#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>

namespace novelty {

enum class MwuMethod { exact, normal_approx_tie_corrected };

std::string_view mwu_method_name(MwuMethod m);

struct MwuOptions {
    // Exact permutation p when n1 * n2 <= exact_threshold.
    std::size_t exact_threshold = 400;
    bool force_approx = false;
};

struct TestResult {
    double u1 = 0.0;          // U of the first sample
    double u2 = 0.0;          // n1 * n2 - u1
    double u_statistic = 0.0; // min(u1, u2)
    double z = 0.0;           // signed; 0 for the exact method
    double p_value = 1.0;     // two-sided, in [0, 1]
    MwuMethod method = MwuMethod::exact;
    bool degenerate = false;  // every value tied; p forced to 1
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

class MwuError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two-sided Mann-Whitney U test with midranks for ties. The exact path
// evaluates the full permutation distribution of U (ties included); the
// approximate path uses the tie-corrected normal variance with continuity
// correction. Throws MwuError if a sample is empty or non-finite.
TestResult mann_whitney_u(std::span<const double> first, std::span<const double> second,
                          const MwuOptions& options = {});

inline constexpr std::size_t kMwuOracleCap = 24;

// Reference two-sided p by enumerating every assignment of the pooled values
// to the two groups and counting pairwise wins directly. Throws MwuError when
// n1 + n2 > cap.
double mwu_permutation_oracle(std::span<const double> first, std::span<const double> second,
                              std::size_t cap = kMwuOracleCap);

} // namespace novelty
