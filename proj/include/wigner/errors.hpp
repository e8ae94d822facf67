#pragma once
#include <stdexcept>

namespace wigner {

// error taxonomy: argument misuse, spectral-domain violations, numeric
// non-convergence, config validation, file I/O
struct argument_error : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct domain_error : std::domain_error { using std::domain_error::domain_error; };
struct numeric_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct config_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct io_error : std::runtime_error { using std::runtime_error::runtime_error; };

}  // namespace wigner
