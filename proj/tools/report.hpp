#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dm::cli {

// What every command prints: header, echoed caps, ordered results, warnings.
// Text and json renderings both parse back into the same Report.
struct Report {
    std::string command;
    std::string input;
    std::string digest;
    std::vector<std::pair<std::string, std::string>> caps;
    std::vector<std::pair<std::string, std::string>> results;
    std::vector<std::string> warnings;

    void add(const std::string& key, std::string value)
    {
        while (!value.empty() && value.back() == '\n')
            value.pop_back();
        results.emplace_back(key, std::move(value));
    }
    const std::string* find(const std::string& key) const;

    std::string text() const;
    std::string json() const;
    bool operator==(const Report& o) const = default;
};

Report parseTextReport(const std::string& text);
Report parseJsonReport(const std::string& text);

std::string digestOf(const std::string& text);

// argv-style entry point; returns the process exit code
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dm::cli
