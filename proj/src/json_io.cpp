#include "transit/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "transit/errors.hpp"

namespace transit {

namespace {

void write(const nlohmann::json& j, std::string& out, int indent)
{
    const std::string pad(indent + 2, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            write(it.value(), out, indent + 2);
        }
        out += "\n" + std::string(indent, ' ') + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Flat numeric arrays stay on one line.
        bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat ? ", " : ",\n";
            first = false;
            if (!flat) out += pad;
            write(e, out, indent + 2);
        }
        out += flat ? "]" : "\n" + std::string(indent, ' ') + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string dump_json(const nlohmann::json& j)
{
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

nlohmann::json parse_json(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

} // namespace transit
