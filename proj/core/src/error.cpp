#include "dimer_mirror/error.hpp"

namespace dm {

Error::Error(std::string module, std::string code, const std::string& detail)
    : std::runtime_error(module + "." + code + ": " + detail),
      module_(std::move(module)),
      code_(std::move(code)) {}

void fail(const char* module, const char* code, const std::string& detail)
{
    throw Error(module, code, detail);
}

}  // namespace dm
