#include "report.hpp"

#include <cstdint>
#include <sstream>

#include <json.hpp>

#include "dimer_mirror/error.hpp"

namespace dm::cli {

namespace {

// multi-line values continue on lines indented by two spaces
void putValue(std::ostringstream& out, const std::string& v)
{
    std::istringstream in(v);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        out << (first ? "" : "\n  ") << line;
        first = false;
    }
    out << "\n";
}

std::vector<std::pair<std::string, std::string>> parseCaps(const std::string& s)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) {
        auto eq = w.find('=');
        if (eq == std::string::npos)
            fail("cli", "PARSE_ERROR", "bad cap " + w);
        out.emplace_back(w.substr(0, eq), w.substr(eq + 1));
    }
    return out;
}

}  // namespace

const std::string* Report::find(const std::string& key) const
{
    for (auto& [k, v] : results)
        if (k == key)
            return &v;
    return nullptr;
}

std::string Report::text() const
{
    std::ostringstream out;
    out << "command: " << command << "\n";
    out << "input: " << input << "\n";
    out << "digest: " << digest << "\n";
    out << "caps:";
    for (auto& [k, v] : caps)
        out << " " << k << "=" << v;
    out << "\n";
    for (auto& [k, v] : results) {
        out << k << " = ";
        putValue(out, v);
    }
    for (auto& w : warnings)
        out << "warning: " << w << "\n";
    return out.str();
}

std::string Report::json() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["input"] = input;
    j["digest"] = digest;
    j["caps"] = nlohmann::ordered_json::object();
    for (auto& [k, v] : caps)
        j["caps"][k] = v;
    j["results"] = nlohmann::ordered_json::array();
    for (auto& [k, v] : results)
        j["results"].push_back({{"key", k}, {"value", v}});
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

Report parseTextReport(const std::string& text)
{
    Report r;
    std::istringstream in(text);
    std::string line;
    std::string* last = nullptr;
    while (std::getline(in, line)) {
        if (line.rfind("  ", 0) == 0) {
            if (!last)
                fail("cli", "PARSE_ERROR", "continuation line without a value");
            *last += "\n" + line.substr(2);
            continue;
        }
        last = nullptr;
        if (line.empty())
            continue;
        auto header = [&](const char* key) {
            std::string k = std::string(key) + ":";
            if (line.rfind(k, 0) != 0)
                return false;
            return true;
        };
        if (header("command")) {
            r.command = line.substr(9);
        } else if (header("input")) {
            r.input = line.substr(7);
        } else if (header("digest")) {
            r.digest = line.substr(8);
        } else if (header("caps")) {
            r.caps = parseCaps(line.substr(5));
        } else if (header("warning")) {
            r.warnings.push_back(line.substr(9));
        } else {
            auto eq = line.find(" = ");
            if (eq == std::string::npos)
                fail("cli", "PARSE_ERROR", "unrecognised report line: " + line);
            r.results.emplace_back(line.substr(0, eq), line.substr(eq + 3));
            last = &r.results.back().second;
        }
    }
    return r;
}

Report parseJsonReport(const std::string& text)
{
    Report r;
    auto j = nlohmann::ordered_json::parse(text);
    r.command = j.at("command").get<std::string>();
    r.input = j.at("input").get<std::string>();
    r.digest = j.at("digest").get<std::string>();
    for (auto& [k, v] : j.at("caps").items())
        r.caps.emplace_back(k, v.get<std::string>());
    for (auto& e : j.at("results"))
        r.results.emplace_back(e.at("key").get<std::string>(), e.at("value").get<std::string>());
    for (auto& w : j.at("warnings"))
        r.warnings.push_back(w.get<std::string>());
    return r;
}

std::string digestOf(const std::string& text)
{
    // FNV-1a, 64 bit
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

}  // namespace dm::cli
