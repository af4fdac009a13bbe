#include "infopt/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "infopt/error.hpp"
#include "infopt/parallel.hpp"

namespace infopt {

std::string_view to_string(EngineChoice engine) noexcept {
    switch (engine) {
        case EngineChoice::Ode: return "ode";
        case EngineChoice::MonteCarlo: return "mc";
        case EngineChoice::Pde: return "pde";
        case EngineChoice::Both: return "both";
    }
    return "both";
}

std::string_view to_string(OutputFormat format) noexcept {
    return format == OutputFormat::Json ? "json" : "csv";
}

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& message) {
    throw Error(ErrorKind::ParseError, message);
}

[[noreturn]] void invalid(const std::string& message) {
    throw Error(ErrorKind::ValidationError, message);
}

std::string location(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// Reads fields of one JSON object and rejects keys nobody asked for.
class Fields {
public:
    Fields(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
        if (!object_.is_object()) parse_fail(where("") + "expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return object_.contains(key); }

    const json& get(const std::string& key) {
        seen_.insert(key);
        return object_.at(key);
    }

    double number(const std::string& key) {
        if (!has(key)) parse_fail("missing field '" + path(key) + "'");
        const json& v = get(key);
        if (!v.is_number()) parse_fail(where(key) + "expected a number");
        return v.get<double>();
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
        }
        parse_fail(where(key) + "expected an integer");
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        parse_fail(where(key) + "expected a non-negative integer");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_string()) parse_fail(where(key) + "expected a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = get(key);
        if (!v.is_boolean()) parse_fail(where(key) + "expected true or false");
        return v.get<bool>();
    }

    void finish() const {
        for (const auto& item : object_.items()) {
            if (!seen_.count(item.key())) parse_fail("unknown field '" + path(item.key()) + "'");
        }
    }

    [[nodiscard]] std::string path(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    [[nodiscard]] std::string where(const std::string& key) const {
        return key.empty() && prefix_.empty() ? "" : "field '" + path(key) + "': ";
    }

    const json& object_;
    std::string prefix_;
    std::set<std::string> seen_;
};

int positive_int(Fields& f, const std::string& key, int fallback) {
    const std::int64_t v = f.integer(key, fallback);
    if (v < 1 || v > std::numeric_limits<int>::max()) invalid(f.path(key) + " must be a positive integer");
    return static_cast<int>(v);
}

// Accepts either a scalar `single` or an array `plural`.
std::vector<double> number_list(Fields& f, const std::string& single, const std::string& plural) {
    if (f.has(single) && f.has(plural)) parse_fail("fields '" + single + "' and '" + plural + "' are exclusive");
    std::vector<double> out;
    if (f.has(single)) {
        out.push_back(f.number(single));
    } else if (f.has(plural)) {
        const json& list = f.get(plural);
        if (!list.is_array()) parse_fail("field '" + plural + "': expected an array");
        for (const json& v : list) {
            if (!v.is_number()) parse_fail("field '" + plural + "': expected numbers");
            out.push_back(v.get<double>());
        }
    } else {
        parse_fail("missing field '" + single + "'");
    }
    if (out.empty()) invalid(plural + " must not be empty");
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) invalid(plural + " must not repeat values");
    return out;
}

template <typename Enum, std::size_t N>
Enum choose(const std::string& field, const std::string& value, const std::pair<const char*, Enum> (&options)[N]) {
    for (const auto& [name, e] : options) {
        if (value == name) return e;
    }
    std::string allowed;
    for (const auto& option : options) allowed += std::string(allowed.empty() ? "" : ", ") + option.first;
    invalid(field + " must be one of " + allowed + ", got '" + value + "'");
}

Scenario from_json(const json& doc) {
    Scenario s;
    Fields f(doc, "");
    s.time_unit = f.text("time_unit", s.time_unit);

    s.params.beta = f.number("beta");
    s.params.gamma = f.number("gamma");
    s.params.sigma = f.number("sigma");
    const bool has_zeta = f.has("zeta");
    const bool has_rho = f.has("rho");
    if (has_zeta != has_rho) invalid("zeta and rho must be given together");
    const bool two_factor = has_zeta && has_rho;
    const std::string model = f.text("model", two_factor ? "two_factor" : "one_factor");
    s.model = choose<Model>("model", model, {{"one_factor", Model::OneFactor}, {"two_factor", Model::TwoFactor}});
    if ((s.model == Model::TwoFactor) != two_factor) {
        invalid("model '" + model + (two_factor ? "' does not take zeta and rho" : "' requires zeta and rho"));
    }
    if (two_factor) {
        s.params.zeta = f.number("zeta");
        s.params.rho = f.number("rho");
    }

    s.initial.x = f.number("x0");
    s.initial.y = f.number("y0");
    s.kind = choose<OptionKind>("kind", f.text("kind", "call"), {{"call", OptionKind::Call}, {"put", OptionKind::Put}});
    s.strikes = number_list(f, "strike", "strikes");
    s.maturities = number_list(f, "maturity", "maturities");
    s.discount_rate = f.number("discount_rate", s.discount_rate);
    s.notional = f.number("notional", s.notional);
    s.engine = choose<EngineChoice>("engine", f.text("engine", "both"),
                                    {{"ode", EngineChoice::Ode},
                                     {"mc", EngineChoice::MonteCarlo},
                                     {"pde", EngineChoice::Pde},
                                     {"both", EngineChoice::Both}});
    s.format = choose<OutputFormat>("format", f.text("format", "csv"),
                                    {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});

    if (f.has("mc")) {
        Fields mc(f.get("mc"), "mc");
        s.plan.n_paths = positive_int(mc, "n_paths", s.plan.n_paths);
        s.plan.n_steps = positive_int(mc, "n_steps", s.plan.n_steps);
        s.plan.seed = mc.unsigned_integer("seed", s.plan.seed);
        const std::int64_t workers = mc.integer("workers", s.plan.workers);
        if (workers < 0 || workers > 4096) invalid("mc.workers must be in [0, 4096]");
        s.plan.workers = static_cast<int>(workers);
        mc.finish();
    }
    if (f.has("pde")) {
        Fields pde(f.get("pde"), "pde");
        s.grid.n_x = positive_int(pde, "n_x", s.grid.n_x);
        s.grid.n_y = positive_int(pde, "n_y", s.grid.n_y);
        s.grid.n_time = positive_int(pde, "n_time", s.grid.n_time);
        s.grid.x_cluster = pde.number("x_cluster", s.grid.x_cluster);
        s.grid.y_cluster = pde.number("y_cluster", s.grid.y_cluster);
        s.pde.theta = pde.number("theta", s.pde.theta);
        const std::int64_t damping = pde.integer("damping_steps", s.pde.damping_steps);
        if (damping < 0 || damping > std::numeric_limits<int>::max()) {
            invalid("pde.damping_steps must be a non-negative integer");
        }
        s.pde.damping_steps = static_cast<int>(damping);
        s.pde.peclet_limit = pde.number("peclet_limit", s.pde.peclet_limit);
        s.pde.upwind_y = pde.flag("upwind_y", s.pde.upwind_y);
        s.pde.scheme = choose<AdiScheme>("pde.scheme", pde.text("scheme", std::string(to_string(s.pde.scheme))),
                                         {{"douglas", AdiScheme::Douglas}, {"craig_sneyd", AdiScheme::CraigSneyd}});
        pde.finish();
    }
    if (f.has("ode")) {
        Fields ode(f.get("ode"), "ode");
        s.ode_steps = positive_int(ode, "n_steps", s.ode_steps);
        ode.finish();
    }
    f.finish();

    try {
        validate_params(s.params, s.initial);
        for (double t : s.maturities) {
            for (double k : s.strikes) validate(s.terms(k, t));
        }
    } catch (const OutOfRangeError& e) {
        invalid(e.field() + ": " + e.what());
    }
    return s;
}

double rounded(double value) {
    return std::stod(format_number(value));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(location(text, e.byte) + ": malformed JSON");
    }
    return from_json(doc);
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const Scenario& s) {
    ordered_json doc;
    doc["time_unit"] = s.time_unit;
    doc["model"] = to_string(s.model);
    doc["beta"] = s.params.beta;
    doc["gamma"] = s.params.gamma;
    doc["sigma"] = s.params.sigma;
    if (s.model == Model::TwoFactor) {
        doc["zeta"] = s.params.zeta;
        doc["rho"] = s.params.rho;
    }
    doc["x0"] = s.initial.x;
    doc["y0"] = s.initial.y;
    doc["kind"] = to_string(s.kind);
    doc["strikes"] = s.strikes;
    doc["maturities"] = s.maturities;
    doc["discount_rate"] = s.discount_rate;
    doc["notional"] = s.notional;
    doc["engine"] = to_string(s.engine);
    doc["format"] = to_string(s.format);
    doc["mc"] = {{"n_paths", s.plan.n_paths},
                 {"n_steps", s.plan.n_steps},
                 {"seed", s.plan.seed},
                 {"workers", s.plan.workers}};
    doc["pde"] = {{"n_x", s.grid.n_x},
                  {"n_y", s.grid.n_y},
                  {"n_time", s.grid.n_time},
                  {"x_cluster", s.grid.x_cluster},
                  {"y_cluster", s.grid.y_cluster},
                  {"theta", s.pde.theta},
                  {"damping_steps", s.pde.damping_steps},
                  {"peclet_limit", s.pde.peclet_limit},
                  {"upwind_y", s.pde.upwind_y},
                  {"scheme", to_string(s.pde.scheme)}};
    doc["ode"] = {{"n_steps", s.ode_steps}};
    return doc.dump(2) + "\n";
}

std::vector<ResultRow> run_scenario(const Scenario& s, const RunOptions& options) {
    if (s.engine == EngineChoice::Ode) invalid("engine 'ode' produces a path, not prices");
    const bool use_mc = s.engine == EngineChoice::MonteCarlo || s.engine == EngineChoice::Both;
    const bool use_pde = s.engine == EngineChoice::Pde || s.engine == EngineChoice::Both;
    std::vector<ResultRow> rows;

    if (use_mc) {
        for (double t : s.maturities) {
            const auto start = std::chrono::steady_clock::now();
            const TerminalSample sample = simulate_terminal(s.params, s.initial, t, s.plan);
            for (double k : s.strikes) {
                const PriceEstimate est = price_mc(sample, s.terms(k, t));
                rows.push_back({k, t, Method::MonteCarlo, est.price, est.std_error, est.n_paths,
                                options.timing ? elapsed_ms(start) : 0.0});
            }
        }
    }

    if (use_pde) {
        std::vector<std::pair<double, double>> jobs;
        for (double t : s.maturities) {
            for (double k : s.strikes) jobs.emplace_back(k, t);
        }
        std::vector<ResultRow> pde_rows(jobs.size());
        parallel_chunks(jobs.size(), s.plan.workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const auto [k, t] = jobs[i];
                const auto start = std::chrono::steady_clock::now();
                const OptionTerms terms = s.terms(k, t);
                const PriceEstimate est =
                    price_pde(pde_solve(s.params, terms, s.grid, s.model, s.pde), s.initial, terms);
                pde_rows[i] = {k, t, Method::PDE, est.price, 0.0, 0, options.timing ? elapsed_ms(start) : 0.0};
            }
        });
        rows.insert(rows.end(), pde_rows.begin(), pde_rows.end());
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.strike, a.maturity, a.method) < std::tie(b.strike, b.maturity, b.method);
    });
    return rows;
}

OdePath run_ode(const Scenario& s) {
    return integrate_sir(s.params, s.initial, s.maturities.back(), s.ode_steps);
}

ValueSurface run_surface(const Scenario& s, double strike, double maturity) {
    return pde_solve(s.params, s.terms(strike, maturity), s.grid, s.model, s.pde);
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "strike,maturity,method,price,stderr,n_paths,wall_ms\n";
    for (const ResultRow& r : rows) {
        out << format_number(r.strike) << ',' << format_number(r.maturity) << ',' << to_string(r.method) << ','
            << format_number(r.price) << ',' << format_number(r.std_error) << ',' << r.n_paths << ','
            << format_number(r.wall_ms) << '\n';
    }
}

void write_results_json(std::ostream& out, const std::vector<ResultRow>& rows) {
    ordered_json list = ordered_json::array();
    for (const ResultRow& r : rows) {
        list.push_back({{"strike", rounded(r.strike)},
                        {"maturity", rounded(r.maturity)},
                        {"method", to_string(r.method)},
                        {"price", rounded(r.price)},
                        {"stderr", rounded(r.std_error)},
                        {"n_paths", r.n_paths},
                        {"wall_ms", rounded(r.wall_ms)}});
    }
    out << ordered_json{{"rows", list}}.dump(2) << '\n';
}

void write_ode_csv(std::ostream& out, const OdePath& path) {
    out << "t,x,y,z\n";
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        const SirState& s = path.states[i];
        out << format_number(path.times[i]) << ',' << format_number(s.x) << ',' << format_number(s.y) << ','
            << format_number(s.z()) << '\n';
    }
}

void write_ode_json(std::ostream& out, const OdePath& path) {
    ordered_json list = ordered_json::array();
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        const SirState& s = path.states[i];
        list.push_back({{"t", rounded(path.times[i])}, {"x", rounded(s.x)}, {"y", rounded(s.y)}, {"z", rounded(s.z())}});
    }
    out << ordered_json{{"max_conservation_error", rounded(path.max_conservation_error)}, {"path", list}}.dump(2)
        << '\n';
}

void write_surface_json(std::ostream& out, const ValueSurface& surface) {
    ordered_json x = ordered_json::array();
    ordered_json y = ordered_json::array();
    for (int i = 0; i < surface.grid.n_x; ++i) x.push_back(rounded(surface.grid.x(i)));
    for (int j = 0; j < surface.grid.n_y; ++j) y.push_back(rounded(surface.grid.y(j)));
    ordered_json values = ordered_json::array();
    for (int i = 0; i < surface.grid.n_x; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < surface.grid.n_y; ++j) row.push_back(rounded(surface.at(i, j)));
        values.push_back(std::move(row));
    }
    out << ordered_json{{"tau", rounded(surface.tau)}, {"x", x}, {"y", y}, {"values", values}}.dump(2) << '\n';
}

}  // namespace infopt
