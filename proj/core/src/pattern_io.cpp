#include "slitwave/pattern_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slitwave/errors.hpp"

namespace slitwave {

std::string format_double(double value) {
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
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

double parse_field(const std::string& text, const char* what, long line) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw parse_error(std::string("malformed ") + what + " '" + text + "'",
                          line);
    return value;
}

}  // namespace

void write_pattern_csv(const Pattern& pattern, std::ostream& out) {
    out << "s_m,intensity\n";
    for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
        out << format_double(pattern.positions[i]) << ","
            << format_double(pattern.intensities[i]) << "\n";
    }
    for (const auto& [key, value] : pattern.metadata) {
        if (key.empty())
            out << "# " << value << "\n";
        else
            out << "# " << key << " = " << value << "\n";
    }
}

std::string write_pattern_csv(const Pattern& pattern) {
    std::ostringstream out;
    write_pattern_csv(pattern, out);
    return out.str();
}

void write_pattern_file(const Pattern& pattern, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open '" + path + "' for writing");
    write_pattern_csv(pattern, file);
    if (!file) throw io_error("failed writing '" + path + "'");
}

Pattern parse_pattern_csv(std::istream& in) {
    Pattern pattern;
    std::string line;
    long number = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string text = trim(line);
        if (text.empty()) continue;

        if (text.front() == '#') {
            const std::string body = trim(text.substr(1));
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                pattern.metadata.emplace_back(trim(body.substr(0, eq)),
                                              trim(body.substr(eq + 1)));
            } else {
                pattern.metadata.emplace_back("", body);
            }
            continue;
        }

        if (!header_seen) {
            if (text != "s_m,intensity")
                throw parse_error("expected header 's_m,intensity'", number);
            header_seen = true;
            continue;
        }

        const std::size_t comma = text.find(',');
        if (comma == std::string::npos)
            throw parse_error("expected 's,intensity' row", number);
        pattern.positions.push_back(
            parse_field(trim(text.substr(0, comma)), "position", number));
        pattern.intensities.push_back(
            parse_field(trim(text.substr(comma + 1)), "intensity", number));
    }
    if (!header_seen)
        throw parse_error("expected header 's_m,intensity'", number + 1);

    validate(pattern);
    return pattern;
}

Pattern load_pattern_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open pattern file '" + path + "'");
    return parse_pattern_csv(file);
}

}  // namespace slitwave
