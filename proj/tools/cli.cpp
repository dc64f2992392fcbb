#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kraus_io.hpp"
#include "teq/bounds.hpp"
#include "teq/channel.hpp"
#include "teq/oracle.hpp"
#include "teq/random.hpp"
#include "teq/single_vector.hpp"

namespace teq::cli {

using nlohmann::ordered_json;

namespace {

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string output = "text";
    bool degrees = false;
    bool deterministic = false;
    std::uint64_t seed = 0;
    std::optional<int> restarts;
    std::optional<int> max_evals;
    std::optional<double> tol;
};

struct Options {
    Common common;
    std::string channel;
    std::string family;
    int n = 2;
    double q = 1.0;
    double u = 0.0;
    int k = 1;
    double delta = 0.0;
    std::string measure = "max";
    double overlap_re = 0.0;
    double overlap_im = 0.0;
    int dim = 2;
    bool brute = false;
    std::optional<int> trials;
    std::string suite = "all";
};

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void flatten_into(const ordered_json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, ordered_json>>& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (node.is_array()) {
        for (size_t i = 0; i < node.size(); ++i) flatten_into(node[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, node);
    }
}

std::string scalar_text(const ordered_json& v, bool csv) {
    if (v.is_null()) return csv ? "" : "-";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return csv ? format_number(v.get<double>()) : [&] {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return std::string(buf);
    }();
    if (v.is_number()) return v.dump();
    const auto s = v.get<std::string>();
    if (!csv || s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    return OutputFormat::Text;
}

ordered_json complex_vector_json(const ComplexVector& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

ordered_json diagnostics_json(const SearchDiagnostics& d) {
    return {{"starts", d.starts},
            {"evaluations", d.evaluations},
            {"converged_starts", d.converged_starts},
            {"worst_diameter", d.worst_diameter}};
}

ordered_json header(const std::string& command, const Common& c) {
    ordered_json rec;
    rec["command"] = command;
    rec["version"] = kVersion;
    if (!c.deterministic) rec["timestamp"] = timestamp_utc();
    rec["seed"] = c.seed;
    rec["units"] = c.degrees ? "deg" : "rad";
    return rec;
}

OptimizerConfig optimizer_config(const Common& c) {
    OptimizerConfig cfg;
    cfg.seed = c.seed;
    if (c.restarts) cfg.restarts = *c.restarts;
    if (c.max_evals) cfg.max_evals = *c.max_evals;
    if (c.tol) cfg.tol = *c.tol;
    return cfg;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw InputError(message);
}

Flavor parse_flavor(const std::string& s) { return s == "sum" ? Flavor::Sum : Flavor::Max; }

KrausChannel family_channel(const Options& o, bool n_given, bool q_given, bool u_given) {
    if (o.family == "depolarizing" || o.family == "classical-noise") {
        require(n_given && q_given, "--family " + o.family + " requires --n and --q");
        return o.family == "depolarizing" ? depolarizing_quantum(o.n, o.q) : noisy_classical(o.n, o.q);
    }
    require(u_given, "--family " + o.family + " requires --u");
    require(!n_given || o.n == 2, "--family " + o.family + " is a qubit channel (n = 2)");
    return o.family == "bitflip" ? bit_flip(o.u) : phase_flip(o.u);
}

int cmd_bound(const Options& o, bool n_given, bool q_given, bool u_given, std::ostream& out) {
    const bool has_file = !o.channel.empty();
    const bool has_family = !o.family.empty();
    require(has_file != has_family, "exactly one channel source is required: --channel <file> or --family <name>");
    const KrausChannel c = has_file ? read_kraus_file(o.channel) : family_channel(o, n_given, q_given, u_given);
    const Flavor flavor = parse_flavor(o.measure);
    const auto rep = compute_bounds(c, flavor, optimizer_config(o.common));
    const double scale = o.common.degrees ? 180.0 / std::numbers::pi : 1.0;

    auto rec = header("bound", o.common);
    ordered_json inputs;
    if (has_file) {
        inputs["channel"] = o.channel;
    } else {
        inputs["family"] = o.family;
        if (o.family == "bitflip" || o.family == "phaseflip") {
            inputs["u"] = o.u;
        } else {
            inputs["n"] = o.n;
            inputs["q"] = o.q;
        }
    }
    inputs["measure"] = o.measure;
    inputs["dim"] = c.dim();
    inputs["kraus_count"] = c.count();
    rec["inputs"] = inputs;

    ordered_json res;
    res["lower"] = rep.lower * scale;
    res["lower_label"] = rep.lower_label;
    res["upper"] = rep.upper * scale;
    res["upper_tightened"] = rep.upper_tightened;
    res["exact"] = rep.exact ? ordered_json(*rep.exact * scale) : ordered_json(nullptr);
    res["gap"] = (rep.upper - rep.lower) * scale;
    if (rep.extension) {
        res["extension_d_prime"] = rep.extension->d_prime;
        res["extension_max_norm"] = rep.extension_max_norm * scale;
    }
    res["v_lower"] = complex_vector_json(rep.v_lower.v);
    res["v_upper"] = complex_vector_json(rep.v_upper.v);
    res["lower_search"] = diagnostics_json(rep.lower_diagnostics);
    res["upper_search"] = diagnostics_json(rep.upper_diagnostics);
    rec["results"] = res;
    emit(rec, parse_format(o.common.output), out);
    return kSuccess;
}

int cmd_single_vector(const Options& o, std::ostream& out) {
    const Complex w(o.overlap_re, o.overlap_im);
    require(std::isfinite(w.real()) && std::isfinite(w.imag()) && std::norm(w) <= 1.0 + 1e-12,
            "overlap must lie in the closed unit disk (re^2 + im^2 <= 1)");
    const Overlap ov = Overlap::make(std::abs(w) > 1.0 ? w / std::abs(w) : w);
    const double scale = o.common.degrees ? 180.0 / std::numbers::pi : 1.0;

    auto rec = header("single-vector", o.common);
    ordered_json inputs{{"overlap_re", o.overlap_re}, {"overlap_im", o.overlap_im}};
    if (o.brute) inputs["dim"] = o.dim;
    rec["inputs"] = inputs;
    ordered_json res{{"f_max", f_max(ov) * scale},
                     {"f_sum_lower", f_sum_lower(ov) * scale},
                     {"f_sum_upper", f_sum_upper(ov) * scale}};
    if (o.brute) {
        require(o.dim >= 2 && o.dim <= 4, "--dim must lie in 2..4 for the brute-force search");
        ComplexVector a = ComplexVector::Zero(o.dim);
        ComplexVector b = ComplexVector::Zero(o.dim);
        a(0) = 1.0;
        b(0) = ov.w;
        b(1) = std::sqrt(std::max(0.0, 1.0 - std::norm(ov.w)));
        OracleBudget budget{16, 3000, o.common.seed, 1e-10};
        if (o.common.restarts) budget.restarts = *o.common.restarts;
        if (o.common.max_evals) budget.max_evals = *o.common.max_evals;
        if (o.common.tol) budget.tol = *o.common.tol;
        const auto bm = brute_single_vector(a, b, Flavor::Max, budget);
        const auto bs = brute_single_vector(a, b, Flavor::Sum, budget);
        res["brute_max"] = bm.value * scale;
        res["brute_sum"] = bs.value * scale;
        res["brute_evaluations"] = bm.evals + bs.evals;
    }
    rec["results"] = res;
    emit(rec, parse_format(o.common.output), out);
    return kSuccess;
}

int cmd_erasure(const Options& o, std::ostream& out) {
    const auto r = erasure_compare(o.n, o.delta);
    const double scale = o.common.degrees ? 180.0 / std::numbers::pi : 1.0;
    auto rec = header("erasure-compare", o.common);
    rec["inputs"] = {{"n", o.n}, {"delta", o.delta}};
    rec["results"] = {{"q", r.q},
                      {"quantum", r.quantum * scale},
                      {"classical", r.classical * scale},
                      {"ratio", r.ratio},
                      {"asymptote", r.asymptote},
                      {"limit", r.limit}};
    emit(rec, parse_format(o.common.output), out);
    return kSuccess;
}

int cmd_cascade(const Options& o, std::ostream& out) {
    const auto r = cascade_analysis(o.n, o.q, o.k);
    const double scale = o.common.degrees ? 180.0 / std::numbers::pi : 1.0;
    const double deviation = std::abs(r.ratio / r.sqrt_k - 1.0);
    auto rec = header("cascade", o.common);
    rec["inputs"] = {{"n", o.n}, {"q", o.q}, {"k", o.k}};
    rec["results"] = {{"single", r.single * scale},
                      {"separate", r.separate * scale},
                      {"combined", r.combined * scale},
                      {"ratio", r.ratio},
                      {"sqrt_k", r.sqrt_k},
                      {"relative_deviation", deviation},
                      // The sqrt(k) saving is an approximation for q close to 1 only.
                      {"regime", deviation <= 0.02 ? "sqrt-k" : "large-noise"},
                      {"limit", r.limit}};
    emit(rec, parse_format(o.common.output), out);
    return kSuccess;
}

ordered_json report_json(const LemmaReport& r, bool vacuous) {
    ordered_json j{{"name", r.name},
                   {"trials", r.trials},
                   {"violations", r.violations},
                   {"max_residual", r.max_residual},
                   {"passed", r.passed()},
                   {"vacuous", vacuous}};
    j["first_failure"] = r.first_failure ? ordered_json(*r.first_failure) : ordered_json(nullptr);
    return j;
}

LemmaReport oracle_sandwich(const Options& o, int trials) {
    LemmaReport rep;
    rep.name = "oracle_sandwich";
    OracleBudget budget;
    budget.seed = o.common.seed;
    if (o.common.restarts) budget.restarts = *o.common.restarts;
    if (o.common.max_evals) budget.max_evals = *o.common.max_evals;
    if (o.common.tol) budget.tol = *o.common.tol;
    const OptimizerConfig cfg = optimizer_config(o.common);

    auto fail = [&](const KrausChannel& c, const std::string& what, double lo, double brute, double hi) {
        ++rep.violations;
        if (!rep.first_failure) {
            ordered_json inst{{"check", what}, {"lower", lo}, {"brute", brute}, {"upper", hi},
                              {"seed", o.common.seed}, {"channel", kraus_to_json(c)}};
            rep.first_failure = inst.dump();
        }
    };

    for (int i = 0; i < trials; ++i) {
        auto rng = derived_rng(o.common.seed, static_cast<std::uint64_t>(i));
        const auto c = random_channel(2, 2, rng);
        const double lo = lower_bound(c, Flavor::Max, cfg).value;
        const double hi = upper_bound(c, Flavor::Max, cfg).value;
        const double brute = brute_channel(c, Flavor::Max, c.count(), budget).value;
        ++rep.trials;
        rep.max_residual = std::max({rep.max_residual, lo - brute, brute - hi});
        if (brute < lo - 1e-4 || brute > hi + 1e-4) fail(c, "random channel " + std::to_string(i), lo, brute, hi);
    }
    if (trials > 0) {
        const auto c = depolarizing_quantum(2, 0.9);
        const double exact = std::acos(std::sqrt(0.925));
        const double brute = brute_channel(c, Flavor::Max, c.count(), budget).value;
        ++rep.trials;
        rep.max_residual = std::max(rep.max_residual, std::abs(brute - exact));
        if (std::abs(brute - exact) > 1e-4) fail(c, "depolarizing n=2 q=0.9", exact, brute, exact);
    }
    return rep;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const bool lemmas = o.suite == "lemmas" || o.suite == "all";
    const bool oracle = o.suite == "oracle" || o.suite == "all";
    std::vector<LemmaReport> reports;
    if (lemmas) {
        const int t = o.trials.value_or(100);
        require(t >= 0, "--trials must be non-negative");
        reports.push_back(check_polygon_reduction(o.common.seed, t));
        reports.push_back(check_chord_min_angle(o.common.seed, t));
        reports.push_back(check_appendix_identity(o.common.seed, t));
    }
    if (oracle) {
        const int t = o.trials.value_or(20);
        require(t >= 0, "--trials must be non-negative");
        reports.push_back(oracle_sandwich(o, t));
    }

    auto rec = header("verify", o.common);
    rec["inputs"] = {{"suite", o.suite}, {"trials", o.trials ? ordered_json(*o.trials) : ordered_json(nullptr)}};
    ordered_json suites = ordered_json::array();
    int violations = 0;
    int trials = 0;
    bool vacuous_any = false;
    for (const auto& r : reports) {
        const bool vacuous = r.trials == 0;
        vacuous_any = vacuous_any || vacuous;
        violations += r.violations;
        trials += r.trials;
        suites.push_back(report_json(r, vacuous));
    }
    rec["results"] = {{"suites", suites},
                      {"total_trials", trials},
                      {"total_violations", violations},
                      {"vacuous", vacuous_any},
                      {"passed", violations == 0},
                      {"note", "the oracle is a multi-start heuristic used for cross-validation, not a certificate"}};
    emit(rec, parse_format(o.common.output), out);
    return violations == 0 ? kSuccess : kVerificationFailure;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--output", c.output, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_flag("--degrees", c.degrees, "report angles in degrees");
    sub->add_flag("--deterministic", c.deterministic, "omit the timestamp");
    sub->add_option("--seed", c.seed, "seed for every random choice");
    sub->add_option("--restarts", c.restarts, "multi-start restarts")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-evals", c.max_evals, "evaluation budget per start")->check(CLI::PositiveNumber);
    sub->add_option("--tol", c.tol, "optimizer convergence tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

std::vector<std::pair<std::string, ordered_json>> flatten(const ordered_json& record) {
    std::vector<std::pair<std::string, ordered_json>> out;
    flatten_into(record, "", out);
    return out;
}

void emit(const ordered_json& record, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::Json) {
        out << record.dump(2) << "\n";
        return;
    }
    const auto flat = flatten(record);
    if (format == OutputFormat::Csv) {
        for (size_t i = 0; i < flat.size(); ++i) out << (i ? "," : "") << flat[i].first;
        out << "\n";
        for (size_t i = 0; i < flat.size(); ++i) out << (i ? "," : "") << scalar_text(flat[i].second, true);
        out << "\n";
        return;
    }
    size_t width = 0;
    for (const auto& [k, v] : flat) width = std::max(width, k.size());
    for (const auto& [k, v] : flat) out << std::left << std::setw(static_cast<int>(width) + 2) << k << scalar_text(v, false) << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-energy cost of quantum channels", "teq"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto* bound = app.add_subcommand("bound", "lower and upper bounds for a channel");
    add_common(bound, o.common);
    bound->add_option("--channel", o.channel, "Kraus JSON file");
    bound->add_option("--family", o.family, "built-in channel family")
        ->check(CLI::IsMember({"depolarizing", "classical-noise", "bitflip", "phaseflip"}));
    auto* bn = bound->add_option("--n", o.n, "system dimension");
    auto* bq = bound->add_option("--q", o.q, "noise parameter");
    auto* bu = bound->add_option("--u", o.u, "flip probability");
    bound->add_option("--measure", o.measure, "max or sum")->check(CLI::IsMember({"max", "sum"}));

    auto* single = app.add_subcommand("single-vector", "closed forms for mapping a to b");
    add_common(single, o.common);
    single->add_option("--overlap-re", o.overlap_re, "Re <a|b>");
    single->add_option("--overlap-im", o.overlap_im, "Im <a|b>");
    single->add_flag("--brute", o.brute, "also run the brute-force oracle");
    single->add_option("--dim", o.dim, "state dimension for --brute");

    auto* erasure = app.add_subcommand("erasure-compare", "depolarizing versus classical noise at equal trace distance");
    add_common(erasure, o.common);
    erasure->add_option("--n", o.n, "system dimension")->required();
    erasure->add_option("--delta", o.delta, "trace-distance noise")->required();

    auto* cascade = app.add_subcommand("cascade", "k-fold depolarizing composition");
    add_common(cascade, o.common);
    cascade->add_option("--n", o.n, "system dimension")->required();
    cascade->add_option("--q", o.q, "noise parameter")->required();
    cascade->add_option("--k", o.k, "number of stages")->required();

    auto* verify = app.add_subcommand("verify", "validator suites");
    add_common(verify, o.common);
    verify->add_option("--suite", o.suite, "lemmas, oracle or all")->check(CLI::IsMember({"lemmas", "oracle", "all"}));
    verify->add_option("--trials", o.trials, "trials per suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*bound) return cmd_bound(o, bn->count() > 0, bq->count() > 0, bu->count() > 0, out);
        if (*single) return cmd_single_vector(o, out);
        if (*erasure) return cmd_erasure(o, out);
        if (*cascade) return cmd_cascade(o, out);
        if (*verify) return cmd_verify(o, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kVerificationFailure;
    }
    return kInputError;
}

}  // namespace teq::cli
