#pragma once

#include <stdexcept>
#include <string>

namespace dm {

// Every failure carries a module-qualified code, e.g. "dimer.FACE_TOO_SHORT".
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string code, const std::string& detail);

    const std::string& module() const { return module_; }
    const std::string& code() const { return code_; }
    std::string qualified() const { return module_ + "." + code_; }

private:
    std::string module_;
    std::string code_;
};

[[noreturn]] void fail(const char* module, const char* code, const std::string& detail);

}  // namespace dm
