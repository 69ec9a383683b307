#ifndef LPFIELD_REGISTRY_HPP
#define LPFIELD_REGISTRY_HPP

#include <string>

#include "lpfield/symbols.hpp"

namespace lpfield {

/// Parse a symbol registry name into a Symbol. Grammar:
///   one
///   ns:s=<real>
///   cmrho:m=<real>,rho=<real>
///   sk:k=<int>,m=<real>,rho=<real>
///   tone:v0=<int>[,v1=<int>]
///   xmod:m=<real>,rho=<real>[,decay=<real>][,beta=<real>][,J=<int>][,seed=<int>]
///   product:[<spec>]|[<spec>]
/// Unknown names or malformed parameter lists raise ContractError.
Symbol parse_symbol(const std::string& registry_name, const GridSpec& spec);

}  // namespace lpfield

#endif
