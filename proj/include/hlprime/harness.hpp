// End-to-end prediction against empirical counts.  The predicted main term is
//
//   predicted(X) = sigma_trunc * mu_infty * X^(n - D)
//
// with sigma_trunc the truncated product of local densities of the integer
// system and mu_infty the shell estimate for the system rescaled to the unit
// cube, g(v) = f(X v) / X^ell (exact rational arithmetic).  exp_sum_T is the
// weighted exponential sum the circle method integrates; it is kept as a
// diagnostic, the prediction itself never passes through an arc dissection.

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hlprime/common.hpp"
#include "hlprime/integral.hpp"
#include "hlprime/local.hpp"
#include "hlprime/polysys.hpp"

namespace hlprime {

// f(X v) / X^ell entry by entry; exact rationals, degrees preserved
PolySystem scale_system(const PolySystem& s, std::int64_t X);

struct Prediction {
    double value = 0.0;
    double uncertainty = 0.0;  // propagated: sigma tail + mu interval
    std::int64_t x = 0;
    int power = 0;  // n - D
    bool obstructed = false;
    std::string reason;
    SingularData sigma;
    MuInftyEstimate mu;
    std::uint64_t seed = 0;
};

Prediction predict(const PolySystem& s, std::int64_t X, std::int64_t p_max = 2000,
                   int t_max = 4, std::int64_t samples = 400000,
                   std::uint64_t seed = 1234, work_budget& budget = default_budget());

struct CompareRow {
    std::int64_t x = 0;
    double m_f = 0.0;       // von Mangoldt weighted count
    double m_prime = 0.0;   // prime-log count
    double predicted = 0.0;
    double ratio_m = 0.0;       // NaN when predicted <= 0
    double ratio_mprime = 0.0;  // NaN when predicted <= 0
    double mu_value = 0.0;
    double mu_halfwidth = 0.0;
};

struct ComparisonReport {
    std::string description;
    int n = 0, R = 0, D = 0;
    std::vector<CompareRow> rows;
    SingularData sigma;
    std::pair<double, double> c_f_interval{0.0, 0.0};
    RealVerdict real_point = RealVerdict::unknown;  // scaled system, largest X
    std::string note;
    std::uint64_t seed = 0;
};

ComparisonReport compare(const PolySystem& s, const std::vector<std::int64_t>& x_grid,
                         std::int64_t p_max = 2000, int t_max = 4,
                         std::int64_t samples = 400000, std::uint64_t seed = 1234,
                         work_budget& budget = default_budget());

// T(f; alpha) = sum over x in [0,X]^n of Lambda(x_1)...Lambda(x_n)
//               e(sum_r alpha_r f_r(x));
// enumeration visits the Lambda support only.  n <= 3, X <= 300.
std::complex<double> exp_sum_T(const PolySystem& s, const std::vector<double>& alpha,
                               std::int64_t X, work_budget& budget = default_budget());

struct ArcSpec {
    double C = 0.0;
    std::int64_t x = 0;
    double q_max = 0.0;  // (log X)^C
    // degree -> center-to-edge width X^{-ell} (log X)^C
    std::vector<std::pair<int, double>> widths;
    bool disjoint = false;
    double min_gap = 0.0;    // smallest distance between distinct centers a/q
    double max_width = 0.0;  // widest arc coordinate
    std::int64_t threshold_x = 0;  // first power of ten where the gap criterion holds
};

// builds the major-arc layout at cutoff exponent C and checks, by direct
// enumeration of the reduced fractions with q <= (log X)^C, that distinct
// arc centers are separated by more than two widths
ArcSpec make_arc_spec(const PolySystem& s, std::int64_t X, double C,
                      work_budget& budget = default_budget());

// subcommand dispatch; returns the process exit code:
// 0 success, 2 validation, 3 budget refusal, 4 internal
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hlprime
