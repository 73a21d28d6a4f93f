#include "slitwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "slitwave/pattern_io.hpp"
#include "slitwave/version.hpp"

namespace slitwave {

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::single: return "single";
        case RunMode::double_coherent: return "double-coherent";
        default: return "double-decoherent";
    }
}

RunMode run_mode_from_string(const std::string& name) {
    if (name == "single") return RunMode::single;
    if (name == "double-coherent") return RunMode::double_coherent;
    if (name == "double-decoherent") return RunMode::double_decoherent;
    throw invalid_parameter_error(
        "unknown mode '" + name +
        "' (expected single, double-coherent or double-decoherent)");
}

namespace {

std::string trim(const std::string& text) {
    std::size_t lo = 0;
    std::size_t hi = text.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1])))
        --hi;
    return text.substr(lo, hi - lo);
}

struct RawEntry {
    std::string value;
    long line = 0;
    bool consumed = false;
};

using RawConfig = std::map<std::string, RawEntry>;

const std::set<std::string> known_sections = {
    "physics",    "geometry",   "screen", "superposition",
    "decoherence", "numerics",  "output", "fit"};

RawConfig read_raw(std::istream& in) {
    RawConfig raw;
    std::string section;
    std::string line;
    long number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']')
                throw parse_error("unterminated section header", number);
            section = trim(text.substr(1, text.size() - 2));
            if (!known_sections.count(section))
                throw parse_error("unknown section '" + section + "'", number);
            continue;
        }

        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value'", number);
        std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", number);
        if (!section.empty()) key = section + "." + key;
        if (raw.count(key))
            throw parse_error("duplicate key '" + key + "'", number);
        raw[key] = {value, number, false};
    }
    return raw;
}

class Reader {
public:
    explicit Reader(RawConfig& raw) : raw_(raw) {}

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    std::string require_text(const std::string& key) {
        auto it = raw_.find(key);
        if (it == raw_.end())
            throw validation_error("missing required key '" + key + "'");
        it->second.consumed = true;
        return it->second.value;
    }

    std::string text_or(const std::string& key, const std::string& fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        it->second.consumed = true;
        return it->second.value;
    }

    double require_number(const std::string& key) {
        auto it = raw_.find(key);
        if (it == raw_.end())
            throw validation_error("missing required key '" + key + "'");
        it->second.consumed = true;
        return parse_number(it->second);
    }

    double number_or(const std::string& key, double fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        it->second.consumed = true;
        return parse_number(it->second);
    }

    int integer_or(const std::string& key, int fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        it->second.consumed = true;
        const double value = parse_number(it->second);
        const int rounded = static_cast<int>(value);
        if (static_cast<double>(rounded) != value)
            throw parse_error("expected an integer", it->second.line);
        return rounded;
    }

    bool boolean_or(const std::string& key, bool fallback) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return fallback;
        it->second.consumed = true;
        if (it->second.value == "true") return true;
        if (it->second.value == "false") return false;
        throw parse_error("expected true or false", it->second.line);
    }

    void reject_unconsumed() const {
        for (const auto& [key, entry] : raw_) {
            if (!entry.consumed)
                throw parse_error("unknown key '" + key + "'", entry.line);
        }
    }

    long line_of(const std::string& key) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? 0 : it->second.line;
    }

private:
    static double parse_number(const RawEntry& entry) {
        const char* begin = entry.value.c_str();
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            throw parse_error("malformed number '" + entry.value + "'",
                              entry.line);
        return value;
    }

    RawConfig& raw_;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ',')) {
        const std::string trimmed = trim(item);
        if (!trimmed.empty()) out.push_back(trimmed);
    }
    return out;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw validation_error(message);
}

}  // namespace

void validate(const RunConfig& config) {
    check(config.physics.mass > 0.0, "physics.mass must be positive");
    check(config.physics.velocity > 0.0, "physics.velocity must be positive");
    check(config.physics.hbar > 0.0, "physics.hbar must be positive");
    check(config.physics.amplitude > 0.0, "physics.amplitude must be positive");

    check(config.slit.width > 0.0, "geometry.width must be positive");
    check(config.slit.length > 0.0, "geometry.length must be positive");
    check(config.slit.thickness > 0.0, "geometry.thickness must be positive");
    check(config.slit.gap > 0.0, "geometry.gap must be positive");

    check(config.screen_distance > 0.0, "screen.distance must be positive");
    check(config.n_points >= 2, "screen.n_points must be at least 2");
    check(config.s_min < config.s_max, "screen.s_min must be below screen.s_max");
    check(std::isfinite(config.alpha), "screen.alpha must be finite");

    const bool is_double = config.mode != RunMode::single;
    if (is_double) {
        check(config.superposition.has_value(),
              "missing required key 'superposition.c1'");
        const SuperpositionSpec& sup = *config.superposition;
        check(sup.c1 >= 0.0 && sup.c2 >= 0.0,
              "superposition coefficients must be non-negative");
        check(std::abs(std::hypot(sup.c1, sup.c2) - 1.0) <= 1e-3,
              "superposition.c1/c2 must have unit norm within 1e-3");
    }
    if (config.mode == RunMode::double_decoherent) {
        check(config.decoherence.has_value(),
              "missing required key 'decoherence.lambda_t'");
        const DecoherenceSpec& deco = *config.decoherence;
        check(deco.alpha_t >= 0.0 && deco.alpha_t <= 1.0,
              "decoherence.alpha_t must lie in [0, 1]");
        check(deco.lambda_t >= 0.0 && deco.lambda_t <= 1.0,
              "decoherence.lambda_t must lie in [0, 1]");
    }

    check(config.truncation.max_m >= 0 && config.truncation.max_n >= 0,
          "numerics.max_m and numerics.max_n must be non-negative");
    check(config.truncation.tail_tol > 0.0,
          "numerics.tail_tol must be positive");
    check(config.convergence.max_doublings >= 0,
          "numerics.max_doublings must be non-negative");
    check(!config.output_path.empty(), "output.path must not be empty");

    if (config.has_fit) {
        try {
            validate(config.fit);
        } catch (const invalid_parameter_error& e) {
            throw validation_error(std::string("fit: ") + e.what());
        }
    }
}

RunConfig parse_config(std::istream& in) {
    RawConfig raw = read_raw(in);
    Reader reader(raw);
    RunConfig config;

    try {
        config.mode = run_mode_from_string(reader.require_text("mode"));
    } catch (const invalid_parameter_error& e) {
        throw parse_error(e.what(), reader.line_of("mode"));
    }

    config.physics.mass = reader.require_number("physics.mass");
    config.physics.velocity = reader.require_number("physics.velocity");
    config.physics.hbar = reader.number_or("physics.hbar", default_hbar);
    config.physics.amplitude = reader.require_number("physics.amplitude");

    config.slit.width = reader.require_number("geometry.width");
    config.slit.length = reader.require_number("geometry.length");
    config.slit.thickness = reader.require_number("geometry.thickness");
    if (config.mode == RunMode::single) {
        config.slit.gap = reader.number_or("geometry.gap", config.slit.width);
    } else {
        config.slit.gap = reader.require_number("geometry.gap");
    }

    config.screen_distance = reader.require_number("screen.distance");
    config.s_min = reader.number_or("screen.s_min", config.s_min);
    config.s_max = reader.number_or("screen.s_max", config.s_max);
    config.n_points = reader.integer_or("screen.n_points", config.n_points);
    config.alpha = reader.number_or("screen.alpha", 0.0);

    const bool is_double = config.mode != RunMode::single;
    if (is_double) {
        const double c1 = reader.require_number("superposition.c1");
        if (reader.has("superposition.c2")) {
            const double c2 = reader.require_number("superposition.c2");
            config.superposition = SuperpositionSpec{c1, c2};
        } else {
            check(c1 >= 0.0 && c1 <= 1.0,
                  "superposition.c1 must lie in [0, 1]");
            config.superposition = make_superposition(c1);
        }
    } else if (reader.has("superposition.c1") ||
               reader.has("superposition.c2")) {
        throw validation_error(
            "superposition section is not used in single mode");
    }

    if (config.mode == RunMode::double_decoherent) {
        const bool has_lambda = reader.has("decoherence.lambda_t");
        const bool has_alpha = reader.has("decoherence.alpha_t");
        check(!(has_lambda && has_alpha),
              "specify either decoherence.lambda_t or decoherence.alpha_t, "
              "not both");
        check(has_lambda || has_alpha,
              "missing required key 'decoherence.lambda_t'");
        try {
            if (has_lambda) {
                config.decoherence = decoherence_from_lambda(
                    reader.require_number("decoherence.lambda_t"));
            } else {
                config.decoherence = decoherence_from_alpha(
                    reader.require_number("decoherence.alpha_t"));
            }
        } catch (const invalid_parameter_error& e) {
            throw validation_error(std::string("decoherence: ") + e.what());
        }
    } else if (reader.has("decoherence.lambda_t") ||
               reader.has("decoherence.alpha_t")) {
        throw validation_error(
            "decoherence section is only used in double-decoherent mode");
    }

    try {
        config.kernel =
            kernel_from_string(reader.text_or("numerics.kernel", "fresnel"));
    } catch (const invalid_parameter_error& e) {
        throw parse_error(e.what(), reader.line_of("numerics.kernel"));
    }
    config.truncation.max_m =
        reader.integer_or("numerics.max_m", config.truncation.max_m);
    config.truncation.max_n =
        reader.integer_or("numerics.max_n", config.truncation.max_n);
    config.truncation.tail_tol =
        reader.number_or("numerics.tail_tol", config.truncation.tail_tol);
    config.convergence.auto_converge = reader.boolean_or(
        "numerics.auto_converge", config.convergence.auto_converge);
    config.convergence.max_doublings = reader.integer_or(
        "numerics.max_doublings", config.convergence.max_doublings);

    config.output_path = reader.text_or("output.path", config.output_path);

    const char* fit_keys[] = {"fit.free",        "fit.a_init",
                              "fit.a_min",       "fit.a_max",
                              "fit.c1_init",     "fit.c1_min",
                              "fit.c1_max",      "fit.lambda_init",
                              "fit.lambda_min",  "fit.lambda_max",
                              "fit.max_evaluations", "fit.tolerance"};
    config.has_fit = std::any_of(std::begin(fit_keys), std::end(fit_keys),
                                 [&](const char* key) { return reader.has(key); });
    if (config.has_fit) {
        config.fit.free = split_list(reader.text_or("fit.free", ""));
        config.fit.a_init = reader.number_or("fit.a_init", config.fit.a_init);
        config.fit.a_min = reader.number_or("fit.a_min", config.fit.a_min);
        config.fit.a_max = reader.number_or("fit.a_max", config.fit.a_max);
        config.fit.c1_init =
            reader.number_or("fit.c1_init", config.fit.c1_init);
        config.fit.c1_min = reader.number_or("fit.c1_min", config.fit.c1_min);
        config.fit.c1_max = reader.number_or("fit.c1_max", config.fit.c1_max);
        config.fit.lambda_init =
            reader.number_or("fit.lambda_init", config.fit.lambda_init);
        config.fit.lambda_min =
            reader.number_or("fit.lambda_min", config.fit.lambda_min);
        config.fit.lambda_max =
            reader.number_or("fit.lambda_max", config.fit.lambda_max);
        config.fit.max_evaluations = reader.integer_or(
            "fit.max_evaluations", config.fit.max_evaluations);
        config.fit.tolerance =
            reader.number_or("fit.tolerance", config.fit.tolerance);
    }

    reader.reject_unconsumed();
    validate(config);
    return config;
}

RunConfig parse_config(const std::string& text) {
    std::istringstream stream(text);
    return parse_config(stream);
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open config file '" + path + "'");
    return parse_config(file);
}

namespace detail_config {

// The flat key/value view used by both the canonical writer and the pattern
// metadata echo. Order is the canonical file order.
std::vector<std::pair<std::string, std::string>> items(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("mode", to_string(c.mode));
    out.emplace_back("physics.mass", format_double(c.physics.mass));
    out.emplace_back("physics.velocity", format_double(c.physics.velocity));
    out.emplace_back("physics.hbar", format_double(c.physics.hbar));
    out.emplace_back("physics.amplitude", format_double(c.physics.amplitude));
    out.emplace_back("geometry.width", format_double(c.slit.width));
    out.emplace_back("geometry.length", format_double(c.slit.length));
    out.emplace_back("geometry.thickness", format_double(c.slit.thickness));
    out.emplace_back("geometry.gap", format_double(c.slit.gap));
    out.emplace_back("screen.distance", format_double(c.screen_distance));
    out.emplace_back("screen.s_min", format_double(c.s_min));
    out.emplace_back("screen.s_max", format_double(c.s_max));
    out.emplace_back("screen.n_points", std::to_string(c.n_points));
    out.emplace_back("screen.alpha", format_double(c.alpha));
    if (c.superposition) {
        out.emplace_back("superposition.c1", format_double(c.superposition->c1));
        out.emplace_back("superposition.c2", format_double(c.superposition->c2));
    }
    if (c.decoherence) {
        out.emplace_back("decoherence.lambda_t",
                         format_double(c.decoherence->lambda_t));
    }
    out.emplace_back("numerics.kernel", to_string(c.kernel));
    out.emplace_back("numerics.max_m", std::to_string(c.truncation.max_m));
    out.emplace_back("numerics.max_n", std::to_string(c.truncation.max_n));
    out.emplace_back("numerics.tail_tol", format_double(c.truncation.tail_tol));
    out.emplace_back("numerics.auto_converge",
                     c.convergence.auto_converge ? "true" : "false");
    out.emplace_back("numerics.max_doublings",
                     std::to_string(c.convergence.max_doublings));
    out.emplace_back("output.path", c.output_path);
    if (c.has_fit) {
        std::string joined;
        for (const std::string& name : c.fit.free) {
            if (!joined.empty()) joined += ",";
            joined += name;
        }
        out.emplace_back("fit.free", joined);
        out.emplace_back("fit.a_init", format_double(c.fit.a_init));
        out.emplace_back("fit.a_min", format_double(c.fit.a_min));
        out.emplace_back("fit.a_max", format_double(c.fit.a_max));
        out.emplace_back("fit.c1_init", format_double(c.fit.c1_init));
        out.emplace_back("fit.c1_min", format_double(c.fit.c1_min));
        out.emplace_back("fit.c1_max", format_double(c.fit.c1_max));
        out.emplace_back("fit.lambda_init", format_double(c.fit.lambda_init));
        out.emplace_back("fit.lambda_min", format_double(c.fit.lambda_min));
        out.emplace_back("fit.lambda_max", format_double(c.fit.lambda_max));
        out.emplace_back("fit.max_evaluations",
                         std::to_string(c.fit.max_evaluations));
        out.emplace_back("fit.tolerance", format_double(c.fit.tolerance));
    }
    return out;
}

}  // namespace detail_config

std::string write_config(const RunConfig& config) {
    std::string out;
    std::string section;
    for (const auto& [key, value] : detail_config::items(config)) {
        const std::size_t dot = key.find('.');
        const std::string key_section =
            (dot == std::string::npos) ? "" : key.substr(0, dot);
        const std::string name =
            (dot == std::string::npos) ? key : key.substr(dot + 1);
        if (key_section != section) {
            section = key_section;
            out += "\n[" + section + "]\n";
        }
        out += name + " = " + value + "\n";
    }
    return out;
}

ExperimentalSeries parse_experimental_csv(std::istream& in,
                                          const std::string& label) {
    std::string line;
    long number = 0;
    bool header_seen = false;
    std::vector<std::pair<double, double>> rows;

    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (!header_seen) {
            if (text != "s_m,counts")
                throw parse_error("expected header 's_m,counts'", number);
            header_seen = true;
            continue;
        }
        const std::size_t comma = text.find(',');
        if (comma == std::string::npos)
            throw parse_error("expected 's,counts' row", number);
        const std::string s_text = trim(text.substr(0, comma));
        const std::string c_text = trim(text.substr(comma + 1));

        char* end = nullptr;
        const double s = std::strtod(s_text.c_str(), &end);
        if (end == s_text.c_str() || *end != '\0')
            throw parse_error("malformed position '" + s_text + "'", number);
        end = nullptr;
        const double counts = std::strtod(c_text.c_str(), &end);
        if (end == c_text.c_str() || *end != '\0')
            throw parse_error("malformed counts '" + c_text + "'", number);
        if (!(counts >= 0.0))
            throw validation_error("negative counts at line " +
                                   std::to_string(number));
        rows.emplace_back(s, counts);
    }
    if (!header_seen)
        throw parse_error("expected header 's_m,counts'", number + 1);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    ExperimentalSeries series;
    series.label = label;
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < rows.size() && rows[j].first == rows[i].first) {
            sum += rows[j].second;
            ++j;
        }
        series.positions.push_back(rows[i].first);
        series.counts.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    validate(series);
    return series;
}

ExperimentalSeries load_experimental_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open data file '" + path + "'");
    return parse_experimental_csv(file, path);
}

}  // namespace slitwave
