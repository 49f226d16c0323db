#include "cli/commands.hpp"

#include "cli/output.hpp"
#include "matchdist/distances.hpp"
#include "matchdist/distributions.hpp"
#include "matchdist/simulation.hpp"
#include "matchdist/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>

namespace matchdist::cli {
namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Globals {
    std::string format = "csv";
    int digits = 15;
    std::optional<int> precision;
    std::string out_path;
    unsigned workers = 1;
    std::uint64_t seed = 20240601;

    int work() const { return precision.value_or(digits + 35); }
};

struct Run {
    Document doc;
    int code = kSuccess;
};

Rational parse_lambda(const std::string& text, const char* flag) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

Rational require_matching_lambda(const std::string& text) {
    Rational l = parse_lambda(text, "--lambda");
    if (sgn(l) <= 0 || l > 1) throw UsageError("--lambda must lie in (0, 1] for the matching model, got " + text);
    return l;
}

Rational require_positive(const std::string& text, const char* flag) {
    Rational v = parse_lambda(text, flag);
    if (sgn(v) <= 0) throw UsageError(std::string(flag) + " must be positive, got " + text);
    return v;
}

// Builds at the working precision, retrying with more digits when a printed
// cell is not pinned down by its enclosure.
template <class Build>
auto certified(int work, Build&& build) {
    for (int extra = 0;; extra += 20) {
        try {
            return build(work + extra, extra);
        } catch (const AmbiguousRounding&) {
            if (extra >= 60) throw;
        }
    }
}

Rational quadrature_tol(int digits, int extra, unsigned long n) {
    return decimal_ulp(digits + 4 + extra) / Rational(n + 1);
}

Cell verdict(bool ok) { return Cell::label(ok ? "pass" : "fail"); }

// Rows computed independently, possibly in parallel, then kept in order.
template <class RowFn>
std::vector<std::vector<Cell>> parallel_rows(std::size_t count, unsigned workers, RowFn&& row) {
    std::vector<std::vector<Cell>> rows(count);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(workers))
    for (std::size_t i = 0; i < count; ++i) {
        try {
            rows[i] = row(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

// ---- pmf ----

struct PmfArgs {
    std::string dist;
    unsigned long n = 1;
    std::string lambda = "1";
};

Run cmd_pmf(const Globals& g, const PmfArgs& a) {
    Run r;
    r.doc.params = {{"dist", a.dist}, {"n", std::to_string(a.n)}};
    r.doc.table.columns = {"j", "exact", "probability"};
    auto exact_rows = [&](const FinitePmf& pmf) {
        for (std::size_t j = 0; j < pmf.size(); ++j) {
            r.doc.table.rows.push_back({Cell::integer(j), Cell::fraction(pmf[j]), Cell::decimal(pmf[j], g.digits)});
        }
    };
    if (a.dist == "classical") {
        if (a.n < 1) throw UsageError("--n must be >= 1");
        exact_rows(classical_matching_pmf(a.n));
    } else if (a.dist == "generalized") {
        if (a.n < 1) throw UsageError("--n must be >= 1");
        Rational l = require_matching_lambda(a.lambda);
        r.doc.params.emplace_back("lambda", to_fraction_string(l));
        exact_rows(generalized_matching_pmf({a.n, l}));
    } else {
        Rational l = require_positive(a.lambda, "--lambda");
        r.doc.params.emplace_back("lambda", to_fraction_string(l));
        r.doc.table.rows = certified(g.work(), [&](int work, int) {
            std::vector<std::vector<Cell>> rows;
            auto masses = poisson_pmf_prefix(l, a.n, work);
            for (std::size_t j = 0; j < masses.size(); ++j) {
                rows.push_back({Cell::integer(j), Cell::null(), Cell::decimal(masses[j], g.digits)});
            }
            return rows;
        });
    }
    return r;
}

// ---- moments ----

struct MomentArgs {
    std::string dist;
    unsigned long n = 1;
    std::string lambda = "1";
    std::optional<unsigned long> kmax;
};

Run cmd_moments(const Globals& g, const MomentArgs& a) {
    Run r;
    r.doc.params = {{"dist", a.dist}};
    r.doc.table.columns = {"k", "exact", "value"};
    FactorialMomentSeq m;
    if (a.dist == "poisson") {
        Rational l = require_positive(a.lambda, "--lambda");
        r.doc.params.emplace_back("lambda", to_fraction_string(l));
        unsigned long kmax = a.kmax.value_or(10);
        for (unsigned long k = 0; k <= kmax; ++k) m.moments.push_back(PoissonMoments{l}.moment(k));
    } else {
        if (a.n < 1) throw UsageError("--n must be >= 1");
        r.doc.params.emplace_back("n", std::to_string(a.n));
        FinitePmf pmf = classical_matching_pmf(a.n);
        if (a.dist == "generalized") {
            Rational l = require_matching_lambda(a.lambda);
            r.doc.params.emplace_back("lambda", to_fraction_string(l));
            pmf = generalized_matching_pmf({a.n, l});
        }
        m = factorial_moments(pmf, a.kmax.value_or(a.n + 2));
    }
    r.doc.params.emplace_back("kmax", std::to_string(m.max_order()));
    for (std::size_t k = 0; k < m.moments.size(); ++k) {
        r.doc.table.rows.push_back({Cell::integer(k), Cell::fraction(m.moments[k]), Cell::decimal(m.moments[k], g.digits)});
    }
    return r;
}

// ---- dist ----

struct DistArgs {
    std::string metric;
    unsigned long n = 1;
    std::string lambda = "1";
    std::optional<std::string> alpha;
    std::string method = "all";
};

Run cmd_dist(const Globals& g, const DistArgs& a) {
    if (a.n < 1) throw UsageError("--n must be >= 1");
    const bool fm = a.metric == "fm";
    if (fm && !a.alpha) throw UsageError("--alpha is required for --metric fm");
    Rational l = require_matching_lambda(a.lambda);
    Rational alpha = fm ? require_positive(*a.alpha, "--alpha") : Rational(0);
    MatchingParams p(a.n, l);
    const bool want_integral = a.method == "integral" || a.method == "all";
    const bool want_generic = a.method == "generic" || a.method == "all";

    Run r;
    r.doc.params = {{"metric", a.metric}, {"method", a.method}, {"n", std::to_string(a.n)},
                    {"lambda", to_fraction_string(l)}};
    r.doc.table.columns = {"n", "lambda"};
    if (fm) {
        r.doc.params.emplace_back("alpha", to_fraction_string(alpha));
        r.doc.table.columns.push_back("alpha");
    }
    for (const char* c : {"exact", "integral_check", "generic", "lower", "upper", "asymptotic", "ratio", "sandwich",
                          "routes_agree"}) {
        r.doc.table.columns.push_back(c);
    }

    bool ok = true;
    auto row = certified(g.work(), [&](int work, int extra) {
        ReportOptions ro;
        ro.digits = work;
        ro.quadrature_tol = quadrature_tol(g.digits, extra, a.n);
        DistanceReport rep = fm ? d_alpha_matching(p, alpha, ro) : tv_matching(p, ro);
        std::optional<HighPrecision> generic;
        if (want_generic) {
            FinitePmf pmf = generalized_matching_pmf(p);
            generic = fm ? d_alpha_generic(factorial_moments(pmf), PoissonMoments{l}, alpha, work)
                         : tv_generic(pmf, PoissonMoments{l}, work);
        }
        bool agree = (!want_integral || rep.routes_agree()) && (!generic || consistent(rep.exact, *generic));
        bool sandwich = rep.sandwich_holds();
        ok = sandwich && agree;
        std::vector<Cell> cells = {Cell::integer(a.n), Cell::fraction(l)};
        if (fm) cells.push_back(Cell::fraction(alpha));
        cells.push_back(Cell::decimal(rep.exact, g.digits));
        cells.push_back(want_integral ? Cell::decimal(rep.integral_check, g.digits) : Cell::null());
        cells.push_back(generic ? Cell::decimal(*generic, g.digits) : Cell::null());
        cells.push_back(Cell::decimal(rep.lower_bound, g.digits));
        cells.push_back(Cell::decimal(rep.upper_bound, g.digits));
        cells.push_back(Cell::decimal(rep.asymptotic, g.digits));
        cells.push_back(Cell::decimal(rep.ratio_to_asymptotic, g.digits));
        cells.push_back(verdict(sandwich));
        cells.push_back(want_integral || want_generic ? verdict(agree) : Cell::null());
        return cells;
    });
    r.doc.table.rows.push_back(std::move(row));
    r.code = ok ? kSuccess : kPropertyFailure;
    return r;
}

// ---- bounds ----

struct BoundsArgs {
    std::string metric = "tv";
    bool reference = false;
    std::string lambda = "1";
    std::optional<std::string> alpha;
    std::string range;
};

std::pair<unsigned long, unsigned long> parse_range(const std::string& text) {
    auto colon = text.find(':');
    auto number = [&](const std::string& s) {
        if (s.empty() || s.size() > 4 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw UsageError("--n-range must look like a:b, got '" + text + "'");
        }
        return std::stoul(s);
    };
    if (colon == std::string::npos) throw UsageError("--n-range must look like a:b, got '" + text + "'");
    unsigned long lo = number(text.substr(0, colon)), hi = number(text.substr(colon + 1));
    if (lo < 1 || lo > hi || hi > 60) throw UsageError("--n-range needs 1 <= a <= b <= 60, got '" + text + "'");
    return {lo, hi};
}

Run cmd_bounds(const Globals& g, const BoundsArgs& a) {
    auto [lo, hi] = parse_range(a.range);
    const std::size_t count = hi - lo + 1;
    Run r;
    r.doc.params = {{"n_range", a.range}};
    std::vector<char> pass(count, 1);

    if (a.reference) {
        r.doc.params.emplace_back("metric", "reference");
        r.doc.table.columns = {"n", "diaconis_exact", "diaconis", "dasgupta_exact", "dasgupta", "corollary", "tv_exact",
                               "ordered"};
        r.doc.table.rows = parallel_rows(count, g.workers, [&](std::size_t i) {
            unsigned long n = lo + i;
            return certified(g.work(), [&](int work, int) {
                ReferenceBounds b = reference_bounds(n, work);
                HighPrecision tv = tv_matching_exact({n, 1}, work);
                bool ok = b.dasgupta <= b.diaconis && certainly_less(tv, HighPrecision::exact(b.dasgupta)) &&
                          certainly_less(tv, b.corollary);
                pass[i] = ok;
                return std::vector<Cell>{Cell::integer(n),
                                         Cell::fraction(b.diaconis),
                                         Cell::decimal(b.diaconis, g.digits),
                                         Cell::fraction(b.dasgupta),
                                         Cell::decimal(b.dasgupta, g.digits),
                                         Cell::decimal(b.corollary, g.digits),
                                         Cell::decimal(tv, g.digits),
                                         verdict(ok)};
            });
        });
    } else {
        const bool fm = a.metric == "fm";
        if (fm && !a.alpha) throw UsageError("--alpha is required for --metric fm");
        Rational l = require_matching_lambda(a.lambda);
        Rational alpha = fm ? require_positive(*a.alpha, "--alpha") : Rational(0);
        r.doc.params.emplace_back("metric", a.metric);
        r.doc.params.emplace_back("lambda", to_fraction_string(l));
        r.doc.table.columns = {"n", "lambda"};
        if (fm) {
            r.doc.params.emplace_back("alpha", to_fraction_string(alpha));
            r.doc.table.columns.push_back("alpha");
        }
        for (const char* c : {"lower", "exact", "upper", "asymptotic", "ratio", "sandwich"}) {
            r.doc.table.columns.push_back(c);
        }
        r.doc.table.rows = parallel_rows(count, g.workers, [&](std::size_t i) {
            unsigned long n = lo + i;
            return certified(g.work(), [&](int work, int extra) {
                ReportOptions ro;
                ro.digits = work;
                ro.quadrature_tol = quadrature_tol(g.digits, extra, n);
                DistanceReport rep = fm ? d_alpha_matching({n, l}, alpha, ro) : tv_matching({n, l}, ro);
                pass[i] = rep.sandwich_holds();
                std::vector<Cell> cells = {Cell::integer(n), Cell::fraction(l)};
                if (fm) cells.push_back(Cell::fraction(alpha));
                cells.push_back(Cell::decimal(rep.lower_bound, g.digits));
                cells.push_back(Cell::decimal(rep.exact, g.digits));
                cells.push_back(Cell::decimal(rep.upper_bound, g.digits));
                cells.push_back(Cell::decimal(rep.asymptotic, g.digits));
                cells.push_back(Cell::decimal(rep.ratio_to_asymptotic, g.digits));
                cells.push_back(verdict(pass[i]));
                return cells;
            });
        });
    }
    bool all = std::all_of(pass.begin(), pass.end(), [](char c) { return c != 0; });
    r.code = all ? kSuccess : kPropertyFailure;
    return r;
}

// ---- simulate ----

struct SimulateArgs {
    unsigned long n = 1;
    std::string lambda = "1";
    std::uint64_t samples = 100000;
    double z = 5.0;
};

Run cmd_simulate(const Globals& g, const SimulateArgs& a) {
    SimConfig cfg;
    cfg.n = a.n;
    cfg.lambda = require_matching_lambda(a.lambda);
    cfg.samples = a.samples;
    cfg.seed = g.seed;
    cfg.workers = g.workers;
    cfg.z_threshold = a.z;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    MonteCarloResult mc = run_monte_carlo(cfg);

    Run r;
    r.doc.params = {{"n", std::to_string(cfg.n)},
                    {"lambda", to_fraction_string(cfg.lambda)},
                    {"samples", std::to_string(cfg.samples)},
                    {"seed", std::to_string(cfg.seed)},
                    {"workers", std::to_string(cfg.workers)}};
    r.doc.table.columns = {"j", "count", "frequency", "exact_fraction", "exact", "z"};
    double max_z = 0.0;
    for (std::size_t j = 0; j < mc.exact.size(); ++j) {
        double z = mc.stats.per_bin_z[j];
        max_z = std::max(max_z, std::abs(z));
        r.doc.table.rows.push_back({Cell::integer(j), Cell::integer(mc.empirical.counts[j]),
                                    Cell::decimal(Rational(Integer(mc.empirical.counts[j]), Integer(mc.empirical.total)),
                                                  g.digits),
                                    Cell::fraction(mc.exact[j]), Cell::decimal(mc.exact[j], g.digits),
                                    Cell::statistic(z)});
    }
    Table s;
    s.columns = {"key", "value"};
    s.rows = {{Cell::label("samples"), Cell::integer(mc.empirical.total)},
              {Cell::label("max_abs_dev"), Cell::statistic(mc.stats.max_abs_dev)},
              {Cell::label("max_abs_z"), Cell::statistic(max_z)},
              {Cell::label("z_threshold"), Cell::statistic(cfg.z_threshold)},
              {Cell::label("impossible_bins"), Cell::integer(mc.stats.impossible_bins.size())},
              {Cell::label("pass"), Cell::boolean(mc.stats.pass)}};
    r.doc.summary = std::move(s);
    r.code = mc.stats.pass ? kSuccess : kPropertyFailure;
    return r;
}

// ---- verify ----

struct VerifyArgs {
    std::optional<std::string> only;
};

Run cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& err) {
    VerifyOptions vo;
    vo.digits = g.work();
    vo.seed = g.seed;
    vo.workers = g.workers;
    vo.only = a.only;
    std::vector<PropertyOutcome> outcomes;
    try {
        outcomes = run_properties(vo);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Run r;
    r.doc.params = {{"only", a.only.value_or("all")}, {"seed", std::to_string(g.seed)}};
    r.doc.table.columns = {"property", "pass", "cases"};
    for (const auto& o : outcomes) {
        r.doc.table.rows.push_back({Cell::label(o.name), Cell::boolean(o.pass), Cell::integer(o.cases)});
        if (!o.pass) {
            err << "FAIL " << o.name << ": " << o.detail << '\n';
            r.code = kPropertyFailure;
        }
    }
    return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matching distribution versus Poisson: pmfs, moments, distances and checks", "matchdist"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--digits", g.digits, "Significant digits of printed decimals")->check(CLI::Range(1, 1000));
    app.add_option("--precision", g.precision, "Working precision in decimal digits (default digits + 35)")
        ->check(CLI::Range(6, 2000));
    app.add_option("--out", g.out_path, "Write output to this file instead of stdout");
    app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1U, 1024U));
    app.add_option("--seed", g.seed, "Random seed");

    PmfArgs pmf_args;
    auto* pmf = app.add_subcommand("pmf", "Probability mass function");
    pmf->add_option("--dist", pmf_args.dist)->required()->check(CLI::IsMember({"classical", "generalized", "poisson-prefix"}));
    pmf->add_option("--n", pmf_args.n, "Number of items (support size for poisson-prefix)")->required();
    pmf->add_option("--lambda", pmf_args.lambda, "Retention probability or Poisson mean");

    MomentArgs mom_args;
    auto* moments = app.add_subcommand("moments", "Descending factorial moments");
    moments->add_option("--dist", mom_args.dist)->required()->check(CLI::IsMember({"classical", "generalized", "poisson"}));
    moments->add_option("--n", mom_args.n);
    moments->add_option("--lambda", mom_args.lambda);
    moments->add_option("--kmax", mom_args.kmax, "Highest order (default n+2, or 10 for poisson)");

    DistArgs dist_args;
    auto* dist = app.add_subcommand("dist", "Distance of the censored matching law from Poisson");
    dist->add_option("--metric", dist_args.metric)->required()->check(CLI::IsMember({"fm", "tv"}));
    dist->add_option("--n", dist_args.n)->required();
    dist->add_option("--lambda", dist_args.lambda);
    dist->add_option("--alpha", dist_args.alpha);
    dist->add_option("--method", dist_args.method)->check(CLI::IsMember({"series", "integral", "generic", "all"}));

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Bound table over a range of n");
    bounds->add_option("--metric", bounds_args.metric)->check(CLI::IsMember({"fm", "tv"}));
    bounds->add_flag("--reference", bounds_args.reference, "Classical upper bounds instead of a sandwich");
    bounds->add_option("--lambda", bounds_args.lambda);
    bounds->add_option("--alpha", bounds_args.alpha);
    bounds->add_option("--n-range", bounds_args.range, "a:b with 1 <= a <= b <= 60")->required();

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run compared with the exact pmf");
    simulate->add_option("--n", sim_args.n)->required();
    simulate->add_option("--lambda", sim_args.lambda);
    simulate->add_option("--samples", sim_args.samples);
    simulate->add_option("--z", sim_args.z, "Per-bin |z| threshold");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run the property suite");
    verify->add_option("--only", verify_args.only, "Run a single property by name");

    for (auto* sub : {pmf, moments, dist, bounds, simulate, verify}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }

    Run run;
    try {
        if (g.digits > g.work() - 5) {
            throw UsageError("--digits must be at most --precision - 5 (" + std::to_string(g.work() - 5) + ")");
        }
        if (pmf->parsed()) run = cmd_pmf(g, pmf_args);
        else if (moments->parsed()) run = cmd_moments(g, mom_args);
        else if (dist->parsed()) run = cmd_dist(g, dist_args);
        else if (bounds->parsed()) run = cmd_bounds(g, bounds_args);
        else if (simulate->parsed()) run = cmd_simulate(g, sim_args);
        else run = cmd_verify(g, verify_args, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kPropertyFailure;
    }

    run.doc.command = app.get_subcommands().front()->get_name();
    run.doc.working_precision = g.work();
    run.doc.digits = g.digits;
    std::ostringstream text;
    write(run.doc, g.format == "json" ? Format::Json : Format::Csv, text);
    if (g.out_path.empty()) {
        out << text.str();
    } else {
        std::ofstream file(g.out_path, std::ios::binary);
        if (!file || !(file << text.str())) {
            err << "error: cannot write " << g.out_path << '\n';
            return kUsageError;
        }
    }
    return run.code;
}

}  // namespace matchdist::cli
