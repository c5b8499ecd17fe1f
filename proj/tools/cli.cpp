#include "cli.hpp"

#include "symlab/symlab.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace symlab::cli {

namespace {

struct Options
{
    std::string model = "euclidean";
    int n = 3;
    double avr = 1.0;
    std::optional<double> c_override;
    int m = 1;
    double p = 2.0;
    int k = 1;
    int order = 2;
    std::optional<int> N;
    std::optional<double> tol;
    std::optional<double> constant;
    std::uint64_t seed = 1;
    std::optional<int> battery;
    std::string lambdas = "1,10,100,1000";
    std::string inequality;
    std::string weight = "inv-r";
    bool croke = false;
    std::string out;
    std::string format = "csv";
};

std::string format_cell(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return fmt::format("{:.15g}", v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return fmt::format("{}", v);
            }
        },
        cell);
}

ModelManifold build_model(const Options& o)
{
    ModelSpec spec;
    if (o.model == "euclidean") {
        spec = ModelSpec::euclidean();
    } else if (o.model == "cone") {
        spec = ModelSpec::cone(o.avr);
    } else if (o.model == "hyperbolic") {
        spec = ModelSpec::hyperbolic();
    } else {
        throw config_error("unknown model '" + o.model + "' (expected euclidean, cone or hyperbolic)");
    }
    return make_model(o.n, spec, o.c_override);
}

std::map<std::string, std::string> echo_config(const std::string& command, const Options& o)
{
    std::map<std::string, std::string> c{{"subcommand", command}, {"model", o.model}, {"n", std::to_string(o.n)},
        {"avr", format_cell(o.avr)}, {"m", std::to_string(o.m)}, {"p", format_cell(o.p)},
        {"k", std::to_string(o.k)}, {"order", std::to_string(o.order)}, {"seed", std::to_string(o.seed)},
        {"lambdas", o.lambdas}, {"inequality", o.inequality}, {"weight", o.weight},
        {"croke", o.croke ? "true" : "false"}, {"format", o.format}};
    if (o.c_override) {
        c["c_override"] = format_cell(*o.c_override);
    }
    if (o.N) {
        c["N"] = std::to_string(*o.N);
    }
    if (o.tol) {
        c["tol"] = format_cell(*o.tol);
    }
    if (o.battery) {
        c["battery"] = std::to_string(*o.battery);
    }
    if (o.constant) {
        c["constant"] = format_cell(*o.constant);
    }
    return c;
}

struct Outcome
{
    Table table;
    bool pass = true;
};

Outcome run_constants(const Options& o, std::ostream& out)
{
    Outcome res;
    res.table.columns = {"name", "value"};
    double c_g = 0.0;
    if (o.croke) {
        c_g = croke_constant(o.n);
    } else {
        c_g = build_model(o).c_iso();
    }
    const auto add = [&](const std::string& name, double value) {
        res.table.rows.push_back({name, value});
        out << fmt::format("{} = {:.10f}\n", name, value);
    };
    add("c_g", c_g);
    const InequalityConstants c = inequality_constants(o.n, o.m, o.p);
    add("pstar", c.pstar);
    if (c.sobolev_s2) {
        add("S_m2", *c.sobolev_s2);
    }
    add("R_mp", c.rellich);
    if (o.n > 2 * o.m) {
        add("L_m", gazzola_Lm(o.n, o.m));
    }
    return res;
}

Weight rearrangement_weight(const std::string& name)
{
    if (name == "one") {
        return unit_weight();
    }
    if (name == "inv-r") {
        return power_weight(1.0);
    }
    if (name == "inv-1pr2") {
        return {"(1+r)^-2", [](double r) { return 1.0 / ((1.0 + r) * (1.0 + r)); }, 0.0, {}};
    }
    throw config_error("unknown weight '" + name + "' (expected one, inv-r or inv-1pr2)");
}

Outcome run_check_rearrangement(const Options& o, std::ostream& out)
{
    const ModelManifold M = build_model(o);
    const Weight h = rearrangement_weight(o.weight);
    const int N = o.N.value_or(8192);
    const int battery = o.battery.value_or(200);
    const double tol = o.tol.value_or(1e-6);
    detail::require(battery >= 0, "battery size must be non-negative");
    const RadialGrid grid = RadialGrid::uniform(1.0, N);

    Outcome res;
    res.table.columns = {"case_id", "q", "cavalieri_err", "ps_margin", "hl_margin"};
    BatteryRng rng(o.seed);
    int failures = 0;
    for (int id = 0; id < battery; ++id) {
        const RadialFunction u = random_pl_profile(rng, grid);
        const SymmetrizedPair pair = schwarz_rearrange(M, u);
        for (const RearrangementReport& r : rearrangement_checks(M, u, pair, {1.0, 2.0, 4.0}, o.p, h, tol)) {
            res.table.rows.push_back({static_cast<long long>(id), r.q, r.cavalieri_err, r.ps_margin, r.hl_margin});
            if (!r.all_ok()) {
                ++failures;
            }
        }
    }
    res.pass = failures == 0;
    out << fmt::format("check-rearrangement: model={} n={} cases={} N={} weight={} failures={}\n", o.model, o.n,
        battery, N, h.label, failures);
    return res;
}

Outcome run_verify_talenti(const Options& o, std::ostream& out)
{
    const ModelManifold M = build_model(o);
    const int N = o.N.value_or(2000);
    const int battery = o.battery.value_or(0);
    detail::require(battery >= 0, "battery size must be non-negative");
    detail::require(o.k >= 1, "k must be >= 1");
    const RadialGrid grid = RadialGrid::uniform(1.0, N);

    std::vector<RadialFunction> sources;
    if (battery == 0) {
        sources.push_back(RadialFunction::sample(grid, [](double r) { return std::max(1.0 - r, 0.0); }));
    } else {
        BatteryRng rng(o.seed);
        for (int i = 0; i < battery; ++i) {
            sources.push_back(random_nonincreasing_profile(rng, grid));
        }
    }

    Outcome res;
    res.table.columns = {"case_id", "k", "min_margin", "max_ratio", "pass"};
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_deviation = 0.0;
    for (std::size_t id = 0; id < sources.size(); ++id) {
        const ComparisonReport rep = talenti_compare(M, sources[id], o.k, o.tol);
        res.table.rows.push_back(
            {static_cast<long long>(id), static_cast<long long>(o.k), rep.min_margin, rep.max_ratio, rep.pass});
        res.pass = res.pass && rep.pass;
        worst_margin = std::min(worst_margin, rep.min_margin);
        worst_deviation = std::max(worst_deviation, max_relative_deviation(rep.v, rep.u_star, rep.scale));
    }
    out << fmt::format("verify-talenti: model={} n={} k={} cases={} N={} min_margin={:.6e}", o.model, o.n, o.k,
        sources.size(), N, worst_margin);
    if (M.kind() != ModelKind::hyperbolic) {
        out << fmt::format(" equality_deviation={:.6e}", worst_deviation);
    }
    out << (res.pass ? " PASS\n" : " FAIL\n");
    return res;
}

Outcome run_bench(const Options& o, std::ostream& out)
{
    const ModelManifold M = build_model(o);
    const int N = o.N.value_or(4096);
    const int battery = o.battery.value_or(10);
    const double tol = o.tol.value_or(1e-6);
    detail::require(battery >= 0, "battery size must be non-negative");

    std::function<QuotientReport(const RadialFunction&)> evaluate;
    int derivative_order = 2;
    const std::string& which = o.inequality;
    if (which == "sobolev") {
        detail::require_subcritical(o.n, o.m, o.p);
        if (o.p != 2.0 && !o.constant) {
            throw config_error("bench sobolev: --constant is required when p != 2");
        }
        evaluate = [&](const RadialFunction& u) { return sobolev_quotient(M, u, o.m, o.p, o.constant, tol); };
        derivative_order = o.m;
    } else if (which == "rellich") {
        detail::require_subcritical(o.n, o.m, o.p);
        evaluate = [&](const RadialFunction& u) { return rellich_quotient(M, u, o.m, o.p, tol); };
        derivative_order = o.m;
    } else if (which == "improved-adimurthi" || which == "improved-ghoussoub") {
        detail::require_subcritical(o.n, 2, 2.0);
        WeightFamilySpec spec;
        spec.family = which == "improved-adimurthi" ? WeightFamily::adimurthi : WeightFamily::ghoussoub;
        spec.order = o.order;
        spec.radius = std::pow(M.ball_volume(1.0) / unit_ball_volume(o.n), 1.0 / o.n);
        const Weight h = combine_weights(build_weight(spec, o.n), which);
        evaluate = [&M, h, tol](const RadialFunction& u) { return weighted_quotient(M, u, 2, 2.0, h, 1.0, tol); };
    } else if (which == "gazzola-p" || which == "gazzola-bv") {
        const double p = which == "gazzola-bv" ? 2.0 : o.p;
        detail::require(p >= 2.0 && o.n >= 2.0 * p, "bench gazzola: requires p >= 2 and n >= 2p");
        detail::require_subcritical(o.n, 2, p);
        evaluate = [&M, p, tol](const RadialFunction& u) { return gazzola_quotient(M, u, p, 2000, tol); };
    } else if (which == "gazzola-Lm") {
        detail::require_subcritical(o.n, o.m, 2.0);
        evaluate = [&](const RadialFunction& u) { return gazzola_Lm_quotient(M, u, o.m, tol); };
        derivative_order = o.m;
    } else {
        throw config_error("unknown inequality '" + which
            + "' (expected sobolev, rellich, improved-adimurthi, improved-ghoussoub, gazzola-p, gazzola-bv, "
              "gazzola-Lm)");
    }

    const RadialGrid grid = RadialGrid::uniform(1.0, N);
    BatteryRng rng(o.seed);
    const auto bumps = smooth_bump_battery(rng, grid, battery, derivative_order + 2);

    Outcome res;
    res.table.columns = {"case_id", "lhs", "rhs_base", "ratio", "constant", "pass"};
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t id = 0; id < bumps.size(); ++id) {
        const QuotientReport q = evaluate(bumps[id].u);
        res.table.rows.push_back({static_cast<long long>(id), q.lhs, q.rhs_base, q.ratio, q.theoretical_constant, q.pass});
        res.pass = res.pass && q.pass;
        worst = std::min(worst, q.margin());
    }
    out << fmt::format("bench {}: model={} n={} m={} p={} cases={} worst_relative_margin={:.6e} {}\n", which, o.model,
        o.n, o.m, o.p, bumps.size(), worst, res.pass ? "PASS" : "FAIL");
    return res;
}

std::vector<double> parse_lambdas(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw config_error("invalid lambda list entry '" + item + "'");
        }
    }
    return values;
}

Outcome run_sharpness(const Options& o, std::ostream& out)
{
    const ModelManifold M = build_model(o);
    const SweepReport sweep = sharpness_sweep(M, parse_lambdas(o.lambdas), o.N.value_or(8192), o.tol.value_or(0.02));
    Outcome res;
    res.table.columns = {"lambda", "Q", "target", "rel_gap"};
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i) {
        res.table.rows.push_back({sweep.lambdas[i], sweep.quotients[i], sweep.limit_target, sweep.rel_gap(i)});
        out << fmt::format("lambda={:g} Q={:.8g} assembled={:.8g} target={:.8g} rel_gap={:.3e}\n", sweep.lambdas[i],
            sweep.quotients[i], sweep.assembled[i], sweep.limit_target, sweep.rel_gap(i));
    }
    res.pass = sweep.converged;
    return res;
}

// Reads flat key=value lines ('#' starts a comment) into "--key=value" arguments.
std::vector<std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot read config file '" + path + "'");
    }
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(fmt::format("{}:{}: expected key=value", path, lineno));
        }
        args.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
    return args;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw config_error("--config requires a path");
            }
            from_file = read_config(args[++i]);
        } else if (args[i].rfind("--config=", 0) == 0) {
            from_file = read_config(args[i].substr(9));
        } else {
            rest.push_back(args[i]);
        }
    }
    if (from_file.empty() || rest.empty()) {
        return rest;
    }
    // File values go right after the subcommand so explicit flags override them.
    std::vector<std::string> merged{rest.front()};
    merged.insert(merged.end(), from_file.begin(), from_file.end());
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

std::string default_output_path(const std::string& command, Format format)
{
    const char* dir = std::getenv("SYMLAB_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0') {
        return {};
    }
    return std::string(dir) + "/" + command + (format == Format::csv ? ".csv" : ".json");
}

} // namespace

std::string to_csv(const Table& table)
{
    std::string text;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        text += (i ? "," : "") + table.columns[i];
    }
    text += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            text += (i ? "," : "") + format_cell(row[i]);
        }
        text += '\n';
    }
    return text;
}

std::string to_json(const Table& table, const std::map<std::string, std::string>& config, double wall_time)
{
    nlohmann::ordered_json doc;
    doc["meta"]["config"] = config;
    doc["meta"]["version"] = version;
    doc["meta"]["wall_time"] = wall_time;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        // JSON has no inf/nan; those become null.
                        obj[table.columns[i]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
                    } else {
                        obj[table.columns[i]] = v;
                    }
                },
                row[i]);
        }
        doc["rows"].push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

void emit_report(const Table& table, Format format, const std::string& path,
    const std::map<std::string, std::string>& config, double wall_time)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw config_error("cannot write report to '" + path + "'");
    }
    file << (format == Format::csv ? to_csv(table) : to_json(table, config, wall_time));
    if (!file.flush()) {
        throw config_error("failed while writing report to '" + path + "'");
    }
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    const auto started = std::chrono::steady_clock::now();
    CLI::App app{"Numerical laboratory for higher-order Sobolev and Rellich inequalities on model manifolds",
        "symlab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    Options o;
    const auto add_model = [&o](CLI::App* sub) {
        sub->add_option("--model", o.model, "euclidean, cone or hyperbolic")->capture_default_str();
        sub->add_option("--n", o.n, "dimension")->capture_default_str();
        sub->add_option("--avr", o.avr, "cone opening (asymptotic volume ratio)")->capture_default_str();
        sub->add_option("--c-override", o.c_override, "isoperimetric constant override in (0, 1]");
    };
    const auto add_output = [&o](CLI::App* sub) {
        sub->add_option("--out", o.out, "report path (default: $SYMLAB_OUTPUT_DIR/<subcommand>.<format>)");
        sub->add_option("--format", o.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--seed", o.seed, "battery seed")->capture_default_str();
    };

    CLI::App* constants = app.add_subcommand("constants", "explicit constants of the inequalities");
    add_model(constants);
    add_output(constants);
    constants->add_option("--m", o.m, "derivative order")->capture_default_str();
    constants->add_option("--p", o.p, "integrability exponent")->capture_default_str();
    constants->add_flag("--croke", o.croke, "report Croke's constant as c_g");

    CLI::App* rearr = app.add_subcommand("check-rearrangement", "Cavalieri, Pólya–Szegő and Hardy–Littlewood battery");
    add_model(rearr);
    add_output(rearr);
    rearr->add_option("--N", o.N, "grid intervals (default 8192)");
    rearr->add_option("--battery", o.battery, "number of random profiles (default 200)");
    rearr->add_option("--tol", o.tol, "tolerance (default 1e-6)");
    rearr->add_option("--p", o.p, "gradient exponent")->capture_default_str();
    rearr->add_option("--weight", o.weight, "Hardy–Littlewood weight: one, inv-r, inv-1pr2")->capture_default_str();

    CLI::App* talenti = app.add_subcommand("verify-talenti", "iterated Talenti comparison");
    add_model(talenti);
    add_output(talenti);
    talenti->add_option("--k", o.k, "order of the Navier problem")->capture_default_str();
    talenti->add_option("--N", o.N, "grid intervals (default 2000)");
    talenti->add_option("--battery", o.battery, "random sources; 0 uses f = (1 - r)_+ (default 0)");
    talenti->add_option("--tol", o.tol, "margin tolerance (default 1e-6 + 10/N)");

    CLI::App* bench = app.add_subcommand("bench", "Sobolev, Rellich and improved Rellich quotients");
    add_model(bench);
    add_output(bench);
    bench->add_option("--inequality", o.inequality, "sobolev, rellich, improved-adimurthi, improved-ghoussoub, "
                                                     "gazzola-p, gazzola-bv, gazzola-Lm")
        ->required();
    bench->add_option("--m", o.m, "derivative order")->capture_default_str();
    bench->add_option("--p", o.p, "integrability exponent")->capture_default_str();
    bench->add_option("--order", o.order, "T (Adimurthi) or k (Ghoussoub)")->capture_default_str();
    bench->add_option("--constant", o.constant, "Euclidean Sobolev constant when p != 2");
    bench->add_option("--N", o.N, "grid intervals (default 4096)");
    bench->add_option("--battery", o.battery, "number of smooth bumps (default 10)");
    bench->add_option("--tol", o.tol, "relative tolerance (default 1e-6)");

    CLI::App* sharp = app.add_subcommand("sharpness", "bubble sweep toward the sharp second-order constant");
    add_model(sharp);
    add_output(sharp);
    sharp->add_option("--lambdas", o.lambdas, "comma-separated increasing lambdas")->capture_default_str();
    sharp->add_option("--N", o.N, "grid intervals (default 8192)");
    sharp->add_option("--tol", o.tol, "relative gap tolerance at the last lambda (default 0.02)");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end()); // CLI11 consumes a reversed vector
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(version) + "\n" : app.help());
            return 0;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const Format format = o.format == "json" ? Format::json : Format::csv;
    try {
        Outcome res;
        if (command == "constants") {
            res = run_constants(o, out);
        } else if (command == "check-rearrangement") {
            res = run_check_rearrangement(o, out);
        } else if (command == "verify-talenti") {
            res = run_verify_talenti(o, out);
        } else if (command == "bench") {
            res = run_bench(o, out);
        } else {
            res = run_sharpness(o, out);
        }
        const std::string path = o.out.empty() ? default_output_path(command, format) : o.out;
        if (!path.empty()) {
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            emit_report(res.table, format, path, echo_config(command, o), wall);
        }
        return res.pass ? 0 : 1;
    } catch (const numeric_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace symlab::cli
