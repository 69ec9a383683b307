#include "lpfield/registry.hpp"

#include <map>

#include "lpfield/experiments.hpp"

namespace lpfield {

namespace {

std::map<std::string, std::string> parse_params(const std::string& body) {
  std::map<std::string, std::string> params;
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    auto eq = item.find('=');
    require(eq != std::string::npos,
            "symbol registry: expected key=value in '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return params;
}

double get_real(const std::map<std::string, std::string>& p,
                const std::string& key) {
  auto it = p.find(key);
  require(it != p.end(), "symbol registry: missing parameter '" + key + "'");
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ContractError("symbol registry: bad value for '" + key + "'");
  }
}

double get_real_or(const std::map<std::string, std::string>& p,
                   const std::string& key, double fallback) {
  return p.count(key) ? get_real(p, key) : fallback;
}

}  // namespace

Symbol parse_symbol(const std::string& name, const GridSpec& spec) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : name.substr(colon + 1);

  if (head == "one") {
    return Symbol("one", SymbolClass{0.0, 1.0, 0.0}, true,
                  [](const Vec2&, const Vec2&) { return cplx{1.0, 0.0}; });
  }
  if (head == "ns") {
    return make_ns(get_real(parse_params(body), "s"));
  }
  if (head == "cmrho") {
    const auto p = parse_params(body);
    return make_cmrho(get_real(p, "m"), get_real(p, "rho"));
  }
  if (head == "sk") {
    const auto p = parse_params(body);
    return make_sk(static_cast<int>(get_real(p, "k")), get_real(p, "m"),
                   get_real(p, "rho"), spec);
  }
  if (head == "tone") {
    const auto p = parse_params(body);
    IVec2 v{static_cast<int>(get_real(p, "v0")),
            static_cast<int>(get_real_or(p, "v1", 0.0))};
    return make_tone(v, spec.d);
  }
  if (head == "xmod") {
    const auto p = parse_params(body);
    const int J = static_cast<int>(get_real_or(p, "J", spec.n() / 8.0));
    return make_xmod_cmrho(get_real(p, "m"), get_real(p, "rho"),
                           get_real_or(p, "decay", 3.0),
                           get_real_or(p, "beta", 0.5), J,
                           static_cast<std::uint64_t>(get_real_or(p, "seed", 1.0)),
                           spec.d);
  }
  if (head == "product") {
    // product:[lhs]|[rhs] with bracketed, possibly nested sub-specs.
    require(body.size() >= 5 && body.front() == '[',
            "symbol registry: product expects [lhs]|[rhs]");
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '[') ++depth;
      if (body[i] == ']') --depth;
      if (depth == 0 && body[i] == '|') {
        split = i;
        break;
      }
    }
    require(split != std::string::npos && body[split - 1] == ']' &&
                body.back() == ']',
            "symbol registry: product expects [lhs]|[rhs]");
    const std::string lhs = body.substr(1, split - 2);
    const std::string rhs = body.substr(split + 2, body.size() - split - 3);
    return symbol_product(parse_symbol(lhs, spec), parse_symbol(rhs, spec));
  }
  throw ContractError("symbol registry: unknown symbol '" + head + "'");
}

}  // namespace lpfield
