#include "oufa/errors.hpp"

namespace oufa {

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace oufa
