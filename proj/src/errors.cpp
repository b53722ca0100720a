#include "qbm/errors.hpp"

namespace qbm {

void throw_invalid(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

} // namespace qbm
