// JSON serialization of the domain types. Field elements are integer
// coefficient sequences (constant term first); everything is integral, so
// identical inputs produce byte-identical documents.
#pragma once

#include <json.hpp>

#include "msf/minlevel.hpp"

namespace msf {

using Json = nlohmann::ordered_json;

inline Json to_json(const FieldElement& x) {
  Json a = Json::array();
  for (auto c : x.coeffs()) a.push_back(static_cast<int64_t>(c));
  return a;
}

inline Json to_json(FieldRef f) {
  return Json{{"ell", f->ell}, {"degree", f->degree}, {"modulus", f->modulus}};
}

inline Json to_json(const Poly& p) {
  Json a = Json::array();
  for (int i = 0; i <= p.degree(); ++i) a.push_back(to_json(p.coeff(i)));
  return a;
}

inline Json to_json(const Matrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m.get(i, j)));
    entries.push_back(std::move(row));
  }
  return Json{{"field", to_json(m.field())},
              {"rows", m.rows()},
              {"cols", m.cols()},
              {"entries", std::move(entries)}};
}

inline Matrix matrix_from_json(const Json& j) {
  const Json& fj = j.at("field");
  FieldRef f = make_extension(fj.at("ell").get<int64_t>(), fj.at("degree").get<int>());
  Matrix m(f, j.at("rows").get<int>(), j.at("cols").get<int>());
  const Json& entries = j.at("entries");
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) {
      std::vector<uint64_t> w;
      for (auto& v : entries.at(i).at(c)) w.push_back(v.get<uint64_t>());
      w.resize(f->degree, 0);
      m.set(i, c, FieldElement(f, std::move(w)));
    }
  return m;
}

inline Json to_json(const QExpansion& q) {
  Json coeffs = Json::array();
  for (int m = 1; m <= q.precision; ++m) coeffs.push_back(to_json(q.a[m]));
  return Json{{"level", q.level},
              {"weight", q.weight},
              {"character", q.character.label()},
              {"field", to_json(q.field)},
              {"precision", q.precision},
              {"coefficients", std::move(coeffs)}};
}

inline Json to_json(const EigenSystem& sys) {
  Json ap = Json::object();
  for (auto& [p, v] : sys.ap) ap[std::to_string(p)] = to_json(v);
  return Json{{"level", sys.level},
              {"weight", sys.weight},
              {"ell", sys.ell},
              {"character", sys.character.label()},
              {"degree", sys.degree()},
              {"field", to_json(sys.field)},
              {"ap", std::move(ap)},
              {"bound", sys.bound},
              {"multiplicity", sys.multiplicity}};
}

inline Json to_json(const Caveat& c) { return Json{{"code", c.code}, {"message", c.message}}; }

inline Json to_json(const Certificate& cert) {
  if (std::holds_alternative<MinimalCertificate>(cert)) {
    const auto& c = std::get<MinimalCertificate>(cert);
    return Json{{"type", "Minimal"}, {"level", c.level}, {"weight", c.weight}};
  }
  if (std::holds_alternative<LevelLoweringCertificate>(cert)) {
    const auto& c = std::get<LevelLoweringCertificate>(cert);
    Json matches = Json::array();
    for (auto& m : c.all_matches) matches.push_back(to_json(m));
    return Json{{"type", "LevelLowering"},
                {"r", c.r},
                {"lower_level", c.lower_level},
                {"lower_system", to_json(c.lower_system)},
                {"all_matches", std::move(matches)},
                {"f_expansion", to_json(c.f_expansion)},
                {"alpha_image", to_json(c.alpha_image)},
                {"b_image", to_json(c.b_image)},
                {"c1", to_json(c.c1)},
                {"c2", to_json(c.c2)},
                {"span_verified", c.span_verified},
                {"v1_descends", c.v1_descends},
                {"descent_member", c.descent_member}};
  }
  if (std::holds_alternative<WeightOneCertificate>(cert)) {
    const auto& c = std::get<WeightOneCertificate>(cert);
    return Json{{"type", "WeightToOne"},
                {"v1_expansion", to_json(c.v1_expansion)},
                {"weight1_expansion", to_json(c.weight1_expansion)},
                {"pattern_verified", c.pattern_verified}};
  }
  const auto& c = std::get<WeightTwoCertificate>(cert);
  return Json{{"type", "WeightToTwo"},
              {"weight2_system", to_json(c.weight2_system)},
              {"hasse_image", to_json(c.hasse_image)},
              {"coefficientwise", c.coefficientwise},
              {"member_of_v", c.member_of_v}};
}

inline Json to_json(const MinimalityReport& rep) {
  Json entries = Json::array();
  for (auto& e : rep.entries) {
    Json je{{"r", e.r},
            {"dim", e.dim},
            {"verdict", verdict_name(e.verdict)},
            {"bound", e.bound},
            {"stabilized", e.stabilized}};
    if (e.certificate) je["certificate"] = to_json(*e.certificate);
    entries.push_back(std::move(je));
  }
  Json chain = Json::array();
  for (auto& link : rep.chain) {
    Json packet = Json::object();
    for (auto& [p, v] : link.packet_ints) packet[std::to_string(p)] = v;
    chain.push_back(Json{{"level", link.level},
                         {"weight", link.weight},
                         {"verdict", verdict_name(link.verdict)},
                         {"offending_r", link.offending_r},
                         {"packet_prefix", std::move(packet)}});
  }
  Json checks = Json::array();
  for (auto& c : rep.corollary_checks)
    checks.push_back(Json{{"r", c.r}, {"a", c.a}, {"dim", c.dim}, {"ok", c.ok}});
  Json caveats = Json::array();
  for (auto& c : rep.caveats) caveats.push_back(to_json(c));
  return Json{{"system", to_json(rep.system)},
              {"verdict", verdict_name(rep.verdict)},
              {"entries", std::move(entries)},
              {"chain", std::move(chain)},
              {"corollary_checks", std::move(checks)},
              {"certified_minimal_level", rep.certified_minimal_level},
              {"certified_minimal_weight", rep.certified_minimal_weight},
              {"caveats", std::move(caveats)}};
}

}  // namespace msf
