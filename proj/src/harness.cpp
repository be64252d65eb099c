#include "hlprime/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlprime/arith.hpp"
#include "hlprime/counting.hpp"
#include "hlprime/invariants.hpp"
#include "hlprime/normalize.hpp"
#include "hlprime/weyl.hpp"

namespace hlprime {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t total_terms(const PolySystem& s) {
    std::int64_t t = 0;
    for (const auto& [deg, p] : s.entries()) t += static_cast<std::int64_t>(p.terms().size());
    return t;
}

std::string join_int64(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

// ----------------------------------------------------------------------------

PolySystem scale_system(const PolySystem& s, std::int64_t X) {
    if (X < 2) throw validation_error("scale_system: X must be >= 2");
    std::vector<std::pair<int, Polynomial>> scaled;
    for (const auto& [ell, f] : s.entries()) {
        Polynomial g(s.n());
        for (const auto& [e, c] : f.terms()) {
            const int td = static_cast<int>(total_degree(e));
            // coefficient c X^td / X^ell, exact
            mpz_class den(1);
            mpz_class xz(static_cast<long>(X));
            mpz_pow_ui(den.get_mpz_t(), xz.get_mpz_t(),
                       static_cast<unsigned long>(ell - td));
            mpq_class scale(mpz_class(1), den);
            g.add_term(e, c * scale);
        }
        scaled.emplace_back(ell, std::move(g));
    }
    return PolySystem(s.n(), std::move(scaled));
}

// ----------------------------------------------------------------------------

Prediction predict(const PolySystem& s, std::int64_t X, std::int64_t p_max,
                   int t_max, std::int64_t samples, std::uint64_t seed,
                   work_budget& budget) {
    if (X < 2) throw validation_error("predict: X must be >= 2");
    Prediction out;
    out.x = X;
    out.seed = seed;
    out.power = s.n() - s.D();
    out.sigma = sigma_truncated(s, p_max, t_max, budget);
    const double xp = std::pow(static_cast<double>(X), out.power);

    if (!out.sigma.obstructions.empty()) {
        out.obstructed = true;
        out.reason = "local obstruction at p = " + join_int64(out.sigma.obstructions);
        out.sigma.c_f = 0.0;
        return out;
    }

    PolySystem scaled = scale_system(s, X);
    out.mu = shell_mu_infty(scaled, {0.04, 0.02, 0.01}, samples, seed, budget);
    out.sigma.mu_infty = out.mu.value;
    out.sigma.c_f = out.sigma.sigma_truncated * out.mu.value;
    out.value = out.sigma.c_f * xp;
    const double hw =
        (out.mu.confidence_interval.second - out.mu.confidence_interval.first) / 2.0;
    out.uncertainty = out.sigma.sigma_truncated *
                      (hw + out.sigma.tail_bound * std::abs(out.mu.value)) * xp;
    return out;
}

// ----------------------------------------------------------------------------

ComparisonReport compare(const PolySystem& s, const std::vector<std::int64_t>& x_grid,
                         std::int64_t p_max, int t_max, std::int64_t samples,
                         std::uint64_t seed, work_budget& budget) {
    if (x_grid.empty()) throw validation_error("compare: empty X grid");
    for (std::int64_t x : x_grid)
        if (x < 2) throw validation_error("compare: every X must be >= 2");

    ComparisonReport rep;
    rep.description = serialize_system(s);
    rep.n = s.n();
    rep.R = s.R();
    rep.D = s.D();
    rep.seed = seed;
    rep.sigma = sigma_truncated(s, p_max, t_max, budget);
    const bool obstructed = !rep.sigma.obstructions.empty();

    double empirical_mass = 0.0;
    MuInftyEstimate last_mu;
    for (std::int64_t x : x_grid) {
        CompareRow row;
        row.x = x;
        PolySystem scaled = scale_system(s, x);
        last_mu = shell_mu_infty(scaled, {0.04, 0.02, 0.01}, samples, seed, budget);
        row.mu_value = last_mu.value;
        row.mu_halfwidth = (last_mu.confidence_interval.second -
                            last_mu.confidence_interval.first) / 2.0;
        row.m_f = weighted_count(s, x, budget).weighted_sum;
        row.m_prime = prime_log_count(s, x, budget).weighted_sum;
        empirical_mass += row.m_f;
        row.predicted = obstructed
                            ? 0.0
                            : rep.sigma.sigma_truncated * row.mu_value *
                                  std::pow(static_cast<double>(x), rep.n - rep.D);
        if (row.predicted > 0.0) {
            row.ratio_m = row.m_f / row.predicted;
            row.ratio_mprime = row.m_prime / row.predicted;
        } else {
            row.ratio_m = std::numeric_limits<double>::quiet_NaN();
            row.ratio_mprime = std::numeric_limits<double>::quiet_NaN();
        }
        rep.rows.push_back(row);
    }

    if (obstructed) {
        rep.c_f_interval = {0.0, 0.0};
        rep.sigma.c_f = 0.0;
        rep.note = empirical_mass == 0.0
                       ? "agreement by local obstruction: predicted 0, empirical 0"
                       : "local obstruction: predicted 0; the empirical mass seen is lower order";
    } else {
        rep.sigma.mu_infty = last_mu.value;
        rep.sigma.c_f = rep.sigma.sigma_truncated * last_mu.value;
        const double tail = rep.sigma.tail_bound;
        double lo = rep.sigma.sigma_truncated * (1.0 - tail) *
                    last_mu.confidence_interval.first;
        double hi = rep.sigma.sigma_truncated * (1.0 + tail) *
                    last_mu.confidence_interval.second;
        rep.c_f_interval = {std::min(lo, hi), std::max(lo, hi)};
    }

    if (s.n() <= 4) {
        rep.real_point = real_nonsingular_check(scale_system(s, x_grid.back()), budget);
    }
    return rep;
}

// ----------------------------------------------------------------------------

std::complex<double> exp_sum_T(const PolySystem& s, const std::vector<double>& alpha,
                               std::int64_t X, work_budget& budget) {
    const int n = s.n();
    const int R = s.R();
    if (n < 1 || n > 3) throw validation_error("exp_sum_T: n must be in [1, 3]");
    if (X < 1 || X > 300) throw validation_error("exp_sum_T: X must be in [1, 300]");
    if (static_cast<int>(alpha.size()) != R)
        throw validation_error("exp_sum_T: alpha has " + std::to_string(alpha.size()) +
                               " components, system has " + std::to_string(R));

    PrimeTable pt(X);
    const auto supp = pt.lambda_support(X);
    const std::int64_t S = static_cast<std::int64_t>(supp.size());
    if (S == 0) return {0.0, 0.0};
    std::int64_t count = 1;
    for (int i = 0; i < n; ++i) count *= S;
    budget.check("exp_sum_T",
                 static_cast<double>(count) * static_cast<double>(total_terms(s) + n));

    const auto& entries = s.entries();
    const std::int64_t chunks = count < 1024 ? count : 1024;
    std::vector<double> cre(static_cast<std::size_t>(chunks)),
        cim(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(static)
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        const std::int64_t lo = count * ci / chunks;
        const std::int64_t hi = count * (ci + 1) / chunks;
        kahan_sum re, im;
        std::vector<std::int64_t> x(static_cast<std::size_t>(n));
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            std::int64_t rest = idx;
            double weight = 1.0;
            for (int j = 0; j < n; ++j) {
                const auto& [val, lam] = supp[static_cast<std::size_t>(rest % S)];
                x[static_cast<std::size_t>(j)] = val;
                weight *= lam;
                rest /= S;
            }
            double phase = 0.0;
            for (int r = 0; r < R; ++r)
                phase += alpha[static_cast<std::size_t>(r)] *
                         entries[static_cast<std::size_t>(r)].second.evaluate_int(x).get_d();
            re.add(weight * std::cos(kTwoPi * phase));
            im.add(weight * std::sin(kTwoPi * phase));
        }
        cre[static_cast<std::size_t>(ci)] = re.value();
        cim[static_cast<std::size_t>(ci)] = im.value();
    }

    kahan_sum re, im;
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        re.add(cre[static_cast<std::size_t>(ci)]);
        im.add(cim[static_cast<std::size_t>(ci)]);
    }
    return {re.value(), im.value()};
}

// ----------------------------------------------------------------------------

ArcSpec make_arc_spec(const PolySystem& s, std::int64_t X, double C,
                      work_budget& budget) {
    if (X < 3) throw validation_error("make_arc_spec: X must be >= 3");
    if (!(C > 0.0) || C > 6.0)
        throw validation_error("make_arc_spec: C must lie in (0, 6]");

    ArcSpec spec;
    spec.C = C;
    spec.x = X;
    const double lx = std::log(static_cast<double>(X));
    spec.q_max = std::pow(lx, C);

    int ell_min = 0;
    for (const auto& [ell, p] : s.entries()) {
        spec.widths.emplace_back(
            ell, spec.q_max * std::pow(static_cast<double>(X), -ell));
        if (ell_min == 0 || ell < ell_min) ell_min = ell;
    }
    // duplicate degrees collapse to one row
    std::sort(spec.widths.begin(), spec.widths.end());
    spec.widths.erase(std::unique(spec.widths.begin(), spec.widths.end()),
                      spec.widths.end());
    spec.max_width = 0.0;
    for (const auto& [ell, w] : spec.widths) spec.max_width = std::max(spec.max_width, w);

    std::int64_t Q = static_cast<std::int64_t>(spec.q_max);
    if (Q < 1) Q = 1;
    budget.check("make_arc_spec", static_cast<double>(Q) * static_cast<double>(Q));

    std::vector<double> centers;
    for (std::int64_t q = 1; q <= Q; ++q)
        for (std::int64_t a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1)
                centers.push_back(static_cast<double>(a) / static_cast<double>(q));
    std::sort(centers.begin(), centers.end());
    double gap = 1.0;  // single center: the wraparound distance
    for (std::size_t i = 1; i < centers.size(); ++i)
        gap = std::min(gap, centers[i] - centers[i - 1]);
    if (centers.size() > 1)
        gap = std::min(gap, 1.0 + centers.front() - centers.back());
    spec.min_gap = gap;
    spec.disjoint = spec.widths.empty() || spec.min_gap > 2.0 * spec.max_width;

    // first decade where the separation criterion holds by the q_max formula
    for (int k = 1; k <= 15; ++k) {
        const double x0 = std::pow(10.0, k);
        const double l0 = std::log(x0);
        std::int64_t q0 = static_cast<std::int64_t>(std::pow(l0, C));
        if (q0 < 1) q0 = 1;
        const double gap0 = 1.0 / (static_cast<double>(q0) * static_cast<double>(q0));
        const double w0 =
            std::pow(l0, C) * std::pow(x0, ell_min > 0 ? -ell_min : -1);
        if (gap0 > 2.0 * w0) {
            spec.threshold_x = static_cast<std::int64_t>(x0);
            break;
        }
    }
    return spec;
}

// ----------------------------------------------------------------------------
// CLI

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::string csv_field(double v) {
    if (!std::isfinite(v)) return "";
    return fmt17(v);
}

std::string monomial_str(const Exponents& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += "x" + std::to_string(i + 1);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

PolySystem read_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot read system file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

json mu_json(const MuInftyEstimate& mu) {
    json j{{"value", mu.value},
           {"method", mu.method},
           {"samples", mu.samples},
           {"ci_low", mu.confidence_interval.first},
           {"ci_high", mu.confidence_interval.second},
           {"zero_hit", mu.zero_hit}};
    if (mu.method == "shell")
        j["eps_schedule"] = mu.eps_schedule;
    else
        j["L"] = mu.L;
    return j;
}

json sigma_json(const SingularData& sd) {
    json factors = json::array();
    for (const auto& [p, m] : sd.factors) factors.push_back(json{{"p", p}, {"mu", m}});
    json j{{"sigma_truncated", sd.sigma_truncated},
           {"tail_bound", sd.tail_bound},
           {"p_max", sd.p_max},
           {"obstructions", sd.obstructions},
           {"factors", factors}};
    if (std::isfinite(sd.mu_infty)) j["mu_infty"] = sd.mu_infty;
    if (std::isfinite(sd.c_f)) j["c_f"] = sd.c_f;
    return j;
}

struct CliOptions {
    std::string format = "json";
    std::uint64_t seed = 1234;
    int threads = 0;
    double budget_ops = 0.0;
};

void cmd_normalize(const std::string& file, const CliOptions& opt, std::ostream& out) {
    PolySystem s = read_system(file);
    NormalForm nf = reduce_to_normal_form(s);
    if (opt.format == "json") {
        out << serialize_normal_form(nf) << '\n';
        return;
    }
    out << "degree,c,leading,chi,tail\n";
    for (const auto& e : nf.entries)
        out << e.degree << ',' << e.c.get_str() << ',' << csv_quote(monomial_str(e.leading))
            << ',' << csv_quote(e.chi.to_string()) << ',' << csv_quote(e.tail.to_string())
            << '\n';
}

void cmd_rank(const std::string& file, int degree, const CliOptions& opt,
              std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    std::vector<int> degrees;
    if (degree > 0) {
        degrees.push_back(degree);
    } else {
        for (int ell = 1; ell <= s.max_degree(); ++ell)
            if (s.r(ell) > 0) degrees.push_back(ell);
    }
    RegularityVerdict verdict = regularity_verdict(s, budget);
    if (opt.format == "json") {
        json rows = json::array();
        for (int ell : degrees) {
            RankEstimate re = birch_rank_estimate(s, ell, {101, 103, 107}, budget);
            json row{{"ell", ell},
                     {"r", s.r(ell)},
                     {"method", re.method},
                     {"confidence", re.confidence}};
            if (re.infinite)
                row["rank"] = "infinite";
            else
                row["rank"] = re.value;
            rows.push_back(row);
        }
        json vd{{"satisfied", verdict.satisfied}, {"detail", verdict.detail}};
        out << json{{"degrees", rows}, {"regularity", vd}}.dump(2) << '\n';
        return;
    }
    out << "ell,r,rank,method,confidence\n";
    for (int ell : degrees) {
        RankEstimate re = birch_rank_estimate(s, ell, {101, 103, 107}, budget);
        out << ell << ',' << s.r(ell) << ','
            << (re.infinite ? std::string("inf") : fmt17(re.value)) << ',' << re.method
            << ',' << re.confidence << '\n';
    }
    out << "# regularity: " << (verdict.satisfied ? "satisfied" : "not verifiable")
        << '\n';
}

void cmd_weyl(const std::string& file, int degree, std::vector<std::int64_t> radii,
              const CliOptions& opt, std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    const int ell = degree > 0 ? degree : s.max_degree();
    if (ell < 2) throw validation_error("weyl: needs a degree >= 2 group");
    if (radii.empty()) radii = {6, 10, 14};
    GFit fit = g_estimate(s.group(ell), radii, budget);
    if (opt.format == "json") {
        json j{{"ell", ell},
               {"radii", fit.radii},
               {"counts", fit.counts},
               {"g_infinite", fit.g_infinite},
               {"note", fit.note}};
        if (!fit.g_infinite) j["g"] = fit.fitted_g;
        if (std::isfinite(fit.gamma)) j["gamma"] = fit.gamma;
        if (std::isfinite(fit.gamma_prime)) j["gamma_prime"] = fit.gamma_prime;
        out << j.dump(2) << '\n';
        return;
    }
    out << "R0,z\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i)
        out << fit.radii[i] << ',' << fit.counts[i] << '\n';
    out << "# g = " << (fit.g_infinite ? std::string("inf") : fmt17(fit.fitted_g))
        << ", gamma = " << fmt17(fit.gamma) << ", gamma' = " << fmt17(fit.gamma_prime)
        << '\n';
}

void cmd_count(const std::string& file, std::int64_t x, const std::string& weight,
               const std::string& box, const CliOptions& opt, std::ostream& out,
               work_budget& budget) {
    PolySystem s = read_system(file);
    if (weight != "none" && box != "positive")
        throw validation_error(
            "count: weighted counts are defined over the positive box only "
            "(use --box positive)");
    json j{{"x", x}, {"weight", weight}, {"box", box}};
    if (weight == "none") {
        std::int64_t c = box == "positive" ? integer_count_positive(s, x, budget)
                                           : integer_count(s, x, budget);
        j["count"] = c;
        if (opt.format == "csv") {
            out << "x,count\n" << x << ',' << c << '\n';
            return;
        }
    } else {
        CountResult r = weight == "mangoldt" ? weighted_count(s, x, budget)
                                             : prime_log_count(s, x, budget);
        j["count"] = r.weighted_sum;
        j["raw_solutions"] = r.raw_solutions;
        j["strategy"] = r.enumeration_strategy;
        if (opt.format == "csv") {
            out << "x,count,raw_solutions\n"
                << x << ',' << fmt17(r.weighted_sum) << ',' << r.raw_solutions << '\n';
            return;
        }
    }
    out << j.dump(2) << '\n';
}

void cmd_local(const std::string& file, std::int64_t p, int t_max,
               const CliOptions& opt, std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    LocalProfile prof = mu_p(s, p, t_max, budget);
    if (opt.format == "json") {
        json parts = json::array();
        for (const auto& part : prof.partials) {
            json pj{{"t", part.t}, {"nu", part.nu}, {"nu_route", part.nu_route}};
            if (part.b_route_computed) pj["b_route"] = part.b_route;
            parts.push_back(pj);
        }
        out << json{{"p", prof.p},
                    {"mu_p", prof.mu_p},
                    {"stabilized_at", prof.stabilized_at},
                    {"obstruction", prof.obstruction},
                    {"partials", parts}}
                   .dump(2)
            << '\n';
        return;
    }
    out << "t,nu,nu_route,b_route\n";
    for (const auto& part : prof.partials)
        out << part.t << ',' << part.nu << ',' << fmt17(part.nu_route) << ','
            << (part.b_route_computed ? fmt17(part.b_route) : std::string()) << '\n';
    out << "# mu_p = " << fmt17(prof.mu_p) << ", stabilized_at = " << prof.stabilized_at
        << ", obstruction = " << (prof.obstruction ? "yes" : "no") << '\n';
}

void cmd_sigma(const std::string& file, std::int64_t p_max, int t_max,
               const CliOptions& opt, std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    SingularData sd = sigma_truncated(s, p_max, t_max, budget);
    if (opt.format == "json") {
        out << sigma_json(sd).dump(2) << '\n';
        return;
    }
    out << "sigma_truncated,tail_bound,p_max,obstructed\n"
        << fmt17(sd.sigma_truncated) << ',' << fmt17(sd.tail_bound) << ',' << sd.p_max
        << ',' << (sd.obstructions.empty() ? 0 : 1) << '\n';
}

void cmd_integral(const std::string& file, const std::string& method,
                  std::int64_t samples, std::vector<double> eps, double L,
                  const CliOptions& opt, std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    MuInftyEstimate est;
    if (method == "shell") {
        if (eps.empty()) eps = {0.04, 0.02, 0.01};
        est = shell_mu_infty(s, eps, samples, opt.seed, budget);
    } else {
        est = mu_infty_oscillatory(s, L, budget);
    }
    if (opt.format == "json") {
        out << mu_json(est).dump(2) << '\n';
        return;
    }
    out << "value,method,ci_low,ci_high,samples,zero_hit\n"
        << fmt17(est.value) << ',' << est.method << ','
        << fmt17(est.confidence_interval.first) << ','
        << fmt17(est.confidence_interval.second) << ',' << est.samples << ','
        << (est.zero_hit ? 1 : 0) << '\n';
}

void cmd_predict(const std::string& file, std::int64_t x, std::int64_t p_max,
                 std::int64_t samples, const CliOptions& opt, std::ostream& out,
                 work_budget& budget) {
    PolySystem s = read_system(file);
    Prediction pr = predict(s, x, p_max, 4, samples, opt.seed, budget);
    if (opt.format == "json") {
        json j{{"x", pr.x},
               {"value", pr.value},
               {"uncertainty", pr.uncertainty},
               {"power", pr.power},
               {"obstructed", pr.obstructed},
               {"seed", pr.seed},
               {"sigma", sigma_json(pr.sigma)}};
        if (pr.obstructed)
            j["reason"] = pr.reason;
        else
            j["mu"] = mu_json(pr.mu);
        out << j.dump(2) << '\n';
        return;
    }
    out << "x,value,uncertainty,obstructed\n"
        << pr.x << ',' << fmt17(pr.value) << ',' << fmt17(pr.uncertainty) << ','
        << (pr.obstructed ? 1 : 0) << '\n';
}

void cmd_compare(const std::string& file, std::vector<std::int64_t> x_grid,
                 std::int64_t p_max, std::int64_t samples, const CliOptions& opt,
                 std::ostream& out, work_budget& budget) {
    PolySystem s = read_system(file);
    ComparisonReport rep = compare(s, x_grid, p_max, 4, samples, opt.seed, budget);
    if (opt.format == "json") {
        json rows = json::array();
        for (const auto& row : rep.rows) {
            json rj{{"x", row.x},
                    {"m_f", row.m_f},
                    {"m_prime", row.m_prime},
                    {"predicted", row.predicted},
                    {"mu_value", row.mu_value},
                    {"mu_halfwidth", row.mu_halfwidth}};
            if (std::isfinite(row.ratio_m)) {
                rj["ratio_m"] = row.ratio_m;
                rj["ratio_mprime"] = row.ratio_mprime;
            }
            rows.push_back(rj);
        }
        json j{{"n", rep.n},
               {"R", rep.R},
               {"D", rep.D},
               {"rows", rows},
               {"sigma", sigma_json(rep.sigma)},
               {"c_f_low", rep.c_f_interval.first},
               {"c_f_high", rep.c_f_interval.second},
               {"real_point", to_string(rep.real_point)},
               {"seed", rep.seed}};
        if (!rep.note.empty()) j["note"] = rep.note;
        out << j.dump(2) << '\n';
        return;
    }
    out << "x,m_f,m_prime,predicted,ratio_m,ratio_mprime\n";
    for (const auto& row : rep.rows)
        out << row.x << ',' << fmt17(row.m_f) << ',' << fmt17(row.m_prime) << ','
            << fmt17(row.predicted) << ',' << csv_field(row.ratio_m) << ','
            << csv_field(row.ratio_mprime) << '\n';
    if (!rep.note.empty()) out << "# " << rep.note << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"prediction and counting pipeline"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", opt.seed, "seed for randomized components");
    app.add_option("--threads", opt.threads, "worker thread cap (0 = default)");
    app.add_option("--budget", opt.budget_ops, "operation budget override");

    std::string file;
    int degree = 0;
    std::vector<std::int64_t> radii, x_grid;
    std::vector<double> eps;
    std::int64_t x = 0, p = 3, p_max = 2000, samples = 400000;
    int t_max = 4;
    std::string weight = "mangoldt", box = "positive", method = "shell";
    double L = 8.0;

    CLI::App* c_norm = app.add_subcommand("normalize", "reduce to normal form");
    c_norm->add_option("file", file, "system JSON file")->required();

    CLI::App* c_rank = app.add_subcommand("rank", "rank and regularity report");
    c_rank->add_option("file", file)->required();
    c_rank->add_option("--degree", degree, "restrict to one degree");

    CLI::App* c_weyl = app.add_subcommand("weyl", "auxiliary tuple counts and g fit");
    c_weyl->add_option("file", file)->required();
    c_weyl->add_option("--degree", degree);
    c_weyl->add_option("--radii", radii)->delimiter(',');

    CLI::App* c_count = app.add_subcommand("count", "empirical counts");
    c_count->add_option("file", file)->required();
    c_count->add_option("--x", x)->required();
    c_count->add_option("--weight", weight)
        ->check(CLI::IsMember({"mangoldt", "prime-log", "none"}));
    c_count->add_option("--box", box)->check(CLI::IsMember({"positive", "symmetric"}));

    CLI::App* c_local = app.add_subcommand("local", "one local density profile");
    c_local->add_option("file", file)->required();
    c_local->add_option("--p", p)->required();
    c_local->add_option("--t-max", t_max);

    CLI::App* c_sigma = app.add_subcommand("sigma", "truncated singular series");
    c_sigma->add_option("file", file)->required();
    c_sigma->add_option("--p-max", p_max);
    c_sigma->add_option("--t-max", t_max);

    CLI::App* c_int = app.add_subcommand("integral", "archimedean density");
    c_int->add_option("file", file)->required();
    c_int->add_option("--method", method)
        ->check(CLI::IsMember({"shell", "oscillatory"}));
    c_int->add_option("--samples", samples);
    c_int->add_option("--eps", eps)->delimiter(',');
    c_int->add_option("--L", L);

    CLI::App* c_pred = app.add_subcommand("predict", "main-term prediction");
    c_pred->add_option("file", file)->required();
    c_pred->add_option("--x", x)->required();
    c_pred->add_option("--p-max", p_max);
    c_pred->add_option("--samples", samples);

    CLI::App* c_cmp = app.add_subcommand("compare", "prediction vs empirical counts");
    c_cmp->add_option("file", file)->required();
    c_cmp->add_option("--x-grid", x_grid)->delimiter(',')->required();
    c_cmp->add_option("--p-max", p_max);
    c_cmp->add_option("--samples", samples);

    for (CLI::App* sc : {c_norm, c_rank, c_weyl, c_count, c_local, c_sigma, c_int,
                         c_pred, c_cmp})
        sc->fallthrough();

    std::vector<std::string> storage;
    storage.push_back("hlprime");
    for (const auto& a : args) storage.push_back(a);
    std::vector<char*> argv;
    for (auto& sarg : storage) argv.push_back(sarg.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (opt.threads > 0) set_threads(opt.threads);
        work_budget budget = default_budget();
        if (opt.budget_ops > 0) budget.max_ops = opt.budget_ops;

        if (c_norm->parsed()) cmd_normalize(file, opt, out);
        if (c_rank->parsed()) cmd_rank(file, degree, opt, out, budget);
        if (c_weyl->parsed()) cmd_weyl(file, degree, radii, opt, out, budget);
        if (c_count->parsed()) cmd_count(file, x, weight, box, opt, out, budget);
        if (c_local->parsed()) cmd_local(file, p, t_max, opt, out, budget);
        if (c_sigma->parsed()) cmd_sigma(file, p_max, t_max, opt, out, budget);
        if (c_int->parsed()) cmd_integral(file, method, samples, eps, L, opt, out, budget);
        if (c_pred->parsed()) cmd_predict(file, x, p_max, samples, opt, out, budget);
        if (c_cmp->parsed()) cmd_compare(file, x_grid, p_max, samples, opt, out, budget);
        return 0;
    } catch (const budget_error& e) {
        err << "budget refused: " << e.what() << '\n';
        return 3;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace hlprime
