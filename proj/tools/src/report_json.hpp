#pragma once

#include "json.hpp"

#include "radcap/bounds.hpp"
#include "radcap/exponents.hpp"
#include "radcap/numerics.hpp"

namespace radcap::cli {

using Json = nlohmann::ordered_json;

// {"mantissa": "d.ddd", "exp10": e, "value": best-effort double or null}
Json number(LogScalar x);
// Plain JSON number; non-finite values become the strings "inf", "-inf", "nan".
Json number(double x);
Json log_radius(double t);

Json to_json(const ExponentReport& rep);
Json to_json(const BoundCheckReport& rep);
Json to_json(const BoundPairReport& rep);

// Two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace radcap::cli
