#include "hlprime/integral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hlprime {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::uint64_t kMixStep = 0x9e3779b97f4a7c15ULL;

const int kHaltonBases[4] = {2, 3, 5, 7};

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

double frac(double x) { return x - std::floor(x); }

std::int64_t total_terms(const PolySystem& s) {
    std::int64_t t = 0;
    for (const auto& [deg, p] : s.entries()) t += static_cast<std::int64_t>(p.terms().size());
    return t;
}

void require_dim(const PolySystem& s, int max_n, const char* who) {
    if (s.n() < 1 || s.n() > max_n)
        throw validation_error(std::string(who) + ": dimension must be in [1, " +
                               std::to_string(max_n) + "], got " + std::to_string(s.n()));
}

// least squares fit y = a + b x, returns a
double lsq_intercept(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-30) return sy / m;
    return (sy * sxx - sx * sxy) / det;
}

// eigenvalues of a small symmetric matrix by cyclic Jacobi rotations
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t m = a.size();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(m);
    for (std::size_t i = 0; i < m; ++i) ev[i] = a[i][i];
    return ev;
}

}  // namespace

const char* to_string(RealVerdict v) {
    return v == RealVerdict::yes ? "yes" : "unknown";
}

// ----------------------------------------------------------------------------

OscEstimate oscillatory_I(const PolySystem& s, const std::vector<double>& tau,
                          std::int64_t samples, std::uint64_t seed,
                          work_budget& budget) {
    require_dim(s, 4, "oscillatory_I");
    const int n = s.n();
    const int R = s.R();
    if (static_cast<int>(tau.size()) != R)
        throw validation_error("oscillatory_I: tau has " + std::to_string(tau.size()) +
                               " components, system has " + std::to_string(R));
    if (samples < 8) samples = 8;

    const int K = 8;  // rotation replicates
    const std::int64_t M = std::max<std::int64_t>(samples / K, 1);
    budget.check("oscillatory_I",
                 static_cast<double>(K) * static_cast<double>(M) *
                     static_cast<double>(total_terms(s) + n));

    const auto& entries = s.entries();
    std::vector<double> re(K, 0.0), im(K, 0.0);

#pragma omp parallel for schedule(static)
    for (int k = 0; k < K; ++k) {
        std::mt19937_64 rng(seed ^ (kMixStep * static_cast<std::uint64_t>(k + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> shift(static_cast<std::size_t>(n));
        for (auto& u : shift) u = uni(rng);
        kahan_sum sr, si;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (std::int64_t m = 0; m < M; ++m) {
            for (int j = 0; j < n; ++j)
                v[static_cast<std::size_t>(j)] =
                    frac(radical_inverse(static_cast<std::uint64_t>(m + 1),
                                         kHaltonBases[j]) +
                         shift[static_cast<std::size_t>(j)]);
            double phase = 0.0;
            for (int r = 0; r < R; ++r)
                phase += tau[static_cast<std::size_t>(r)] *
                         entries[static_cast<std::size_t>(r)].second.evaluate_double(v);
            sr.add(std::cos(kTwoPi * phase));
            si.add(std::sin(kTwoPi * phase));
        }
        re[static_cast<std::size_t>(k)] = sr.value() / static_cast<double>(M);
        im[static_cast<std::size_t>(k)] = si.value() / static_cast<double>(M);
    }

    double mr = 0, mi = 0;
    for (int k = 0; k < K; ++k) {
        mr += re[static_cast<std::size_t>(k)];
        mi += im[static_cast<std::size_t>(k)];
    }
    mr /= K;
    mi /= K;
    double var = 0;
    for (int k = 0; k < K; ++k) {
        double dr = re[static_cast<std::size_t>(k)] - mr;
        double di = im[static_cast<std::size_t>(k)] - mi;
        var += dr * dr + di * di;
    }
    var /= (K - 1);

    OscEstimate out;
    out.value = {mr, mi};
    out.std_error = std::sqrt(var / K);
    out.samples = static_cast<std::int64_t>(K) * M;
    return out;
}

// ----------------------------------------------------------------------------

JEstimate j_of_l(const PolySystem& s, double L, work_budget& budget) {
    require_dim(s, 4, "j_of_l");
    const int R = s.R();
    if (R < 1) throw validation_error("j_of_l: system has no forms to integrate against");
    if (R > 2)
        throw validation_error("j_of_l: outer integration over R = " + std::to_string(R) +
                               " is refused, use the shell estimator");
    if (!(L >= 0.0) || L > 1e4) throw validation_error("j_of_l: L must lie in [0, 1e4]");
    JEstimate out;
    out.L = L;
    if (L == 0.0) return out;

    const int n = s.n();
    const std::int64_t M = (R == 1) ? 32768 : 4096;
    const std::int64_t Mh = M / 2;
    const double target_h = (R == 1) ? 0.05 : 0.2;
    std::int64_t steps = static_cast<std::int64_t>(std::ceil(2.0 * L / target_h));
    if (steps < 2) steps = 2;
    if (steps % 2) ++steps;
    const std::int64_t nodes = steps + 1;
    const double h = 2.0 * L / static_cast<double>(steps);

    double node_count = 1.0;
    for (int r = 0; r < R; ++r) node_count *= static_cast<double>(nodes);
    budget.check("j_of_l", node_count * static_cast<double>(M));

    // form values on a fixed Halton set, shared by every tau node
    const auto& entries = s.entries();
    std::vector<std::vector<double>> fv(static_cast<std::size_t>(R),
                                        std::vector<double>(static_cast<std::size_t>(M)));
    {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (std::int64_t m = 0; m < M; ++m) {
            for (int j = 0; j < n; ++j)
                v[static_cast<std::size_t>(j)] =
                    radical_inverse(static_cast<std::uint64_t>(m + 1), kHaltonBases[j]);
            for (int r = 0; r < R; ++r)
                fv[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] =
                    entries[static_cast<std::size_t>(r)].second.evaluate_double(v);
        }
    }

    // Re I(tau) over the full set and over the first half
    const std::int64_t cells = (R == 1) ? nodes : nodes * nodes;
    std::vector<double> full(static_cast<std::size_t>(cells)),
        half(static_cast<std::size_t>(cells));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) {
        double t1, t2 = 0.0;
        if (R == 1) {
            t1 = -L + h * static_cast<double>(c);
        } else {
            t1 = -L + h * static_cast<double>(c / nodes);
            t2 = -L + h * static_cast<double>(c % nodes);
        }
        kahan_sum accf, acch;
        for (std::int64_t m = 0; m < M; ++m) {
            double phase = t1 * fv[0][static_cast<std::size_t>(m)];
            if (R == 2) phase += t2 * fv[1][static_cast<std::size_t>(m)];
            double cr = std::cos(kTwoPi * phase);
            accf.add(cr);
            if (m < Mh) acch.add(cr);
        }
        full[static_cast<std::size_t>(c)] = accf.value() / static_cast<double>(M);
        half[static_cast<std::size_t>(c)] = acch.value() / static_cast<double>(Mh);
    }

    auto simpson_w = [&](std::int64_t i) -> double {
        if (i == 0 || i == steps) return h / 3.0;
        return (i % 2 ? 4.0 : 2.0) * h / 3.0;
    };
    auto trapezoid_w = [&](std::int64_t i) -> double {
        return (i == 0 || i == steps) ? h / 2.0 : h;
    };

    kahan_sum S, T, Sh;
    for (std::int64_t c = 0; c < cells; ++c) {
        double ws, wt;
        if (R == 1) {
            ws = simpson_w(c);
            wt = trapezoid_w(c);
        } else {
            ws = simpson_w(c / nodes) * simpson_w(c % nodes);
            wt = trapezoid_w(c / nodes) * trapezoid_w(c % nodes);
        }
        S.add(ws * full[static_cast<std::size_t>(c)]);
        T.add(wt * full[static_cast<std::size_t>(c)]);
        Sh.add(ws * half[static_cast<std::size_t>(c)]);
    }

    out.value = S.value();
    out.error = std::abs(S.value() - T.value()) + std::abs(S.value() - Sh.value());
    return out;
}

// ----------------------------------------------------------------------------

MuInftyEstimate shell_mu_infty(const PolySystem& s,
                               const std::vector<double>& eps_schedule,
                               std::int64_t samples, std::uint64_t seed,
                               work_budget& budget) {
    if (s.n() < 1) throw validation_error("shell_mu_infty: empty variable set");
    if (eps_schedule.size() < 3)
        throw validation_error("shell_mu_infty: schedule needs at least 3 levels");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0))
            throw validation_error("shell_mu_infty: epsilon levels must be positive");
        if (i && !(eps_schedule[i] < eps_schedule[i - 1]))
            throw validation_error("shell_mu_infty: schedule must strictly decrease");
    }
    if (samples < 100000)
        throw validation_error("shell_mu_infty: needs at least 1e5 samples");

    const int n = s.n();
    const int R = s.R();
    const std::size_t E = eps_schedule.size();
    budget.check("shell_mu_infty",
                 static_cast<double>(samples) *
                     static_cast<double>(total_terms(s) + n + R));

    const int K = 16;  // independent blocks for the interval
    const std::int64_t bs = samples / K;
    const auto& entries = s.entries();

    std::vector<std::vector<std::int64_t>> counts(
        static_cast<std::size_t>(K), std::vector<std::int64_t>(E, 0));

#pragma omp parallel for schedule(static)
    for (int k = 0; k < K; ++k) {
        std::mt19937_64 rng(seed ^ (kMixStep * static_cast<std::uint64_t>(k + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> v(static_cast<std::size_t>(n));
        auto& row = counts[static_cast<std::size_t>(k)];
        for (std::int64_t i = 0; i < bs; ++i) {
            for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = uni(rng);
            double worst = 0.0;
            for (int r = 0; r < R; ++r)
                worst = std::max(
                    worst,
                    std::abs(entries[static_cast<std::size_t>(r)].second.evaluate_double(v)));
            for (std::size_t e = 0; e < E; ++e)
                if (worst <= eps_schedule[e]) ++row[e];
        }
    }

    std::int64_t grand = 0;
    for (const auto& row : counts)
        for (auto c : row) grand += c;

    MuInftyEstimate out;
    out.method = "shell";
    out.eps_schedule = eps_schedule;
    out.samples = static_cast<std::int64_t>(K) * bs;

    if (grand == 0) {
        out.zero_hit = true;
        return out;
    }

    std::vector<double> intercepts(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        std::vector<double> dens(E);
        for (std::size_t e = 0; e < E; ++e)
            dens[e] = static_cast<double>(counts[static_cast<std::size_t>(k)][e]) /
                      (static_cast<double>(bs) * std::pow(2.0 * eps_schedule[e], R));
        intercepts[static_cast<std::size_t>(k)] = lsq_intercept(eps_schedule, dens);
    }
    double mean = 0;
    for (double a : intercepts) mean += a;
    mean /= K;
    double var = 0;
    for (double a : intercepts) var += (a - mean) * (a - mean);
    var /= (K - 1);
    const double t975_15 = 2.131;  // two-sided 95%, 15 degrees of freedom
    double halfwidth = t975_15 * std::sqrt(var / K);

    out.value = std::max(0.0, mean);
    out.confidence_interval = {std::min(mean - halfwidth, out.value),
                               std::max(mean + halfwidth, out.value)};
    return out;
}

MuInftyEstimate mu_infty_oscillatory(const PolySystem& s, double L,
                                     work_budget& budget) {
    JEstimate j = j_of_l(s, L, budget);
    MuInftyEstimate out;
    out.method = "oscillatory";
    out.L = L;
    out.value = j.value;
    out.samples = (s.R() == 1) ? 32768 : 4096;
    out.confidence_interval = {j.value - std::max(j.error, 1e-12),
                               j.value + std::max(j.error, 1e-12)};
    return out;
}

// ----------------------------------------------------------------------------

RealVerdict real_nonsingular_check(const PolySystem& s, work_budget& budget) {
    require_dim(s, 4, "real_nonsingular_check");
    const int n = s.n();
    const int R = s.R();
    if (R == 0) return RealVerdict::yes;
    if (R > n) return RealVerdict::unknown;  // rank can never reach R

    const auto& entries = s.entries();
    std::vector<std::vector<Polynomial>> dF;
    for (int r = 0; r < R; ++r) {
        std::vector<Polynomial> row;
        for (int j = 0; j < n; ++j)
            row.push_back(entries[static_cast<std::size_t>(r)].second.derivative(j));
        dF.push_back(std::move(row));
    }

    const int starts = 64, iters = 400;
    budget.check("real_nonsingular_check",
                 static_cast<double>(starts) * iters *
                     static_cast<double>(R * n) *
                     static_cast<double>(total_terms(s) + 1));

    auto phi = [&](const std::vector<double>& v) {
        double p = 0;
        for (int r = 0; r < R; ++r) {
            double f = entries[static_cast<std::size_t>(r)].second.evaluate_double(v);
            p += f * f;
        }
        return p;
    };

    std::mt19937_64 rng(20240717);
    std::uniform_real_distribution<double> uni(0.05, 0.95);

    for (int st = 0; st < starts; ++st) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& c : v) c = uni(rng);
        double p = phi(v);

        for (int it = 0; it < iters && p > 1e-20; ++it) {
            std::vector<double> g(static_cast<std::size_t>(n), 0.0);
            double gnorm2 = 0;
            for (int j = 0; j < n; ++j) {
                double gj = 0;
                for (int r = 0; r < R; ++r)
                    gj += 2.0 *
                          entries[static_cast<std::size_t>(r)].second.evaluate_double(v) *
                          dF[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]
                              .evaluate_double(v);
                g[static_cast<std::size_t>(j)] = gj;
                gnorm2 += gj * gj;
            }
            if (gnorm2 < 1e-30) break;
            double step = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 48; ++bt) {
                std::vector<double> w(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j)
                    w[static_cast<std::size_t>(j)] = std::clamp(
                        v[static_cast<std::size_t>(j)] -
                            step * g[static_cast<std::size_t>(j)],
                        0.0, 1.0);
                double pw = phi(w);
                if (pw < p - 1e-4 * step * gnorm2) {
                    v = std::move(w);
                    p = pw;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }

        if (p > 1e-16) continue;
        bool interior = true;
        for (double c : v)
            if (!(c > 1e-6 && c < 1.0 - 1e-6)) interior = false;
        if (!interior) continue;

        // Jacobian rank through the spectrum of J J^T
        std::vector<std::vector<double>> J(
            static_cast<std::size_t>(R), std::vector<double>(static_cast<std::size_t>(n)));
        for (int r = 0; r < R; ++r)
            for (int j = 0; j < n; ++j)
                J[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                    dF[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]
                        .evaluate_double(v);
        std::vector<std::vector<double>> JJt(
            static_cast<std::size_t>(R), std::vector<double>(static_cast<std::size_t>(R)));
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < R; ++b) {
                double acc = 0;
                for (int j = 0; j < n; ++j)
                    acc += J[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] *
                           J[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
                JJt[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
            }
        auto ev = symmetric_eigenvalues(JJt);
        double lmin = ev[0], lmax = ev[0];
        for (double e : ev) {
            lmin = std::min(lmin, e);
            lmax = std::max(lmax, e);
        }
        if (lmin >= 1e-8 * std::max(1.0, lmax)) return RealVerdict::yes;
    }
    return RealVerdict::unknown;
}

}  // namespace hlprime
