#pragma once

#include <string>

#include <json.hpp>

#include "fracspec/basis.hpp"
#include "fracspec/types.hpp"

namespace fracspec::io {

/// Shortest round-trip decimal representation of a binary64.
std::string format_double(double v);

nlohmann::json coeffs_to_json(const basis::CoeffVec<double>& u);
nlohmann::json coeffs_to_json(const basis::CoeffVec<Complex>& u);

/// Parses {"alpha": a, "beta": b, "coeffs": [...]} where entries are numbers
/// or [re, im] pairs; the result is complex when any entry is a pair.
basis::CoeffVec<Complex> coeffs_from_json(const nlohmann::json& j);

bool coeffs_all_real(const basis::CoeffVec<Complex>& u);
basis::CoeffVec<double> real_part(const basis::CoeffVec<Complex>& u);

}  // namespace fracspec::io
