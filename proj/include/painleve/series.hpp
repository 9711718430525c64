#pragma once

#include "painleve/model.hpp"
#include "painleve/tps.hpp"

#include <variant>
#include <vector>

namespace painleve {

enum class Backend : unsigned char { Exact, F64, F128, F256 };

const char* backend_name(Backend b);
std::optional<Backend> backend_from_name(std::string_view s);

template <class S> struct TableData {
    std::vector<S> a, A;
};

// Recurrence-generated series coefficients for one branch.
struct CoefficientTable {
    Branch br;
    int N = 0;
    Backend backend = Backend::Exact;
    std::variant<TableData<ExactScalar>, TableData<c64>, TableData<c128>, TableData<c256>> data;

    const TableData<ExactScalar>& exact() const;
    // log(|a_n|) and log(|A_n|); -inf for zero entries.
    double log_abs_a(int n) const;
    double log_abs_A(int n) const;
    bool a_is_zero(int n) const;
    bool A_is_zero(int n) const;
    // last index with a nonzero entry in either row; -1 if all zero
    int last_nonzero() const;
    c64 a_c64(int n) const;
    c64 A_c64(int n) const;
};

CoefficientTable compute_coefficients(const Branch& br, int N, Backend backend,
                                      bool allow_trivial = false);

// Partial sums with prefactors applied, on the universal cover; `sheet` shifts
// the tracked argument by 2*pi*sheet before fractional powers are taken.
std::pair<c64, c64> evaluate(const CoefficientTable& t, const CoverPoint& x, int N_use,
                             int sheet = 0);
template <class C> std::pair<C, C> evaluate_prec(const CoefficientTable& t, const CoverPoint& x,
                                                 int N_use, int sheet = 0);
// Single term n of the u-sum, in the table's own arithmetic (downcast at the end).
c64 evaluate_term_u(const CoefficientTable& t, const CoverPoint& x, int n, int sheet = 0);

struct TruncationChoice {
    int n_star = 0;
    double err_estimate = 0.0;  // magnitude of the smallest retained scan term; 0 if terminating
    bool terminating = false;
};

// Smallest-term truncation: argmin over n of |a_n| r^{-n*step}, ties toward
// smaller n. Zero coefficients carry no information and are skipped; a zero
// tail marks the series as terminating with error 0.
TruncationChoice optimal_truncation(const CoefficientTable& t, double radius);

struct GrowthRow {
    int n;
    double abs_a, abs_A;   // magnitudes (may be inf-scaled via logs for display)
    double root_a;         // |a_n|^{1/n}, 0 for zero entries
    double ratio_a;        // |a_{n+1}|/|a_n| (nan when undefined)
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    bool all_zero = false;
    bool terminating = false;
    bool supergeometric = false;  // |a_n|^{1/n} keeps growing on the trailing window
};

GrowthReport term_growth(const CoefficientTable& t);

struct ResidualReport {
    static constexpr int kInfinite = std::numeric_limits<int>::max();
    int order = -1;        // highest order r with all residual coefficients <= r vanishing
    bool terminates = false;
    int checked_orders = 0;
    bool infinite() const { return order == kInfinite; }
};

// Substitutes the truncated pair into the family's first-order system with
// exact truncated-series arithmetic.
ResidualReport residual_order(const Branch& br, int N);
// Same check for an externally supplied coefficient pair laid out with the
// branch's exponents (used by the symmetry and conjugation properties).
ResidualReport residual_check_exact(const Branch& br, const std::vector<ExactScalar>& a,
                                    const std::vector<ExactScalar>& A);

// Builds the family's first-order-system residual pair (F1, F2) for a given
// coefficient pair; exposed for the exact checks above.
std::pair<GSeries<ExactScalar>, GSeries<ExactScalar>> system_residual_series(
    const Branch& br, const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& A,
    bool complete);

}  // namespace painleve
