#include "fracspec/io.hpp"

#include <charconv>

namespace fracspec::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json coeffs_to_json(const basis::CoeffVec<double>& u) {
  nlohmann::json j;
  j["alpha"] = u.basis.alpha;
  j["beta"] = u.basis.beta;
  j["coeffs"] = u.coeffs;
  return j;
}

nlohmann::json coeffs_to_json(const basis::CoeffVec<Complex>& u) {
  nlohmann::json j;
  j["alpha"] = u.basis.alpha;
  j["beta"] = u.basis.beta;
  auto arr = nlohmann::json::array();
  for (const auto& c : u.coeffs) {
    if (c.imag() == 0.0)
      arr.push_back(c.real());
    else
      arr.push_back(nlohmann::json::array({c.real(), c.imag()}));
  }
  j["coeffs"] = std::move(arr);
  return j;
}

basis::CoeffVec<Complex> coeffs_from_json(const nlohmann::json& j) {
  basis::JfpBasis b(j.at("alpha").get<double>(), j.at("beta").get<double>());
  std::vector<Complex> coeffs;
  for (const auto& e : j.at("coeffs")) {
    if (e.is_array()) {
      if (e.size() != 2) throw std::invalid_argument("coeffs_from_json: bad complex entry");
      coeffs.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      coeffs.emplace_back(e.get<double>(), 0.0);
    }
  }
  return {b, std::move(coeffs)};
}

bool coeffs_all_real(const basis::CoeffVec<Complex>& u) {
  for (const auto& c : u.coeffs)
    if (c.imag() != 0.0) return false;
  return true;
}

basis::CoeffVec<double> real_part(const basis::CoeffVec<Complex>& u) {
  std::vector<double> r(u.coeffs.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = u.coeffs[i].real();
  return {u.basis, std::move(r)};
}

}  // namespace fracspec::io
