#include "zkit/serialize.hpp"

#include <openssl/evp.h>

#include <array>

#include "zkit/pairing/curve.hpp"
#include "zkit/pairing/transparent.hpp"

namespace zkit {
namespace io {
namespace {

using circuit::ConstraintSystem;
using circuit::SparseVector;
using circuit::Visibility;
using circuit::WireInfo;

[[noreturn]] void format_error(const std::string& what) { throw Error(Errc::kFormatError, what); }

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) format_error(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::string string_member(const Json& obj, const char* key) {
  const Json& v = member(obj, key);
  if (!v.is_string()) format_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

const Json& array_member(const Json& obj, const char* key) {
  const Json& v = member(obj, key);
  if (!v.is_array()) format_error(std::string("field '") + key + "' must be an array");
  return v;
}

Visibility parse_visibility(const std::string& s) {
  for (auto v : {Visibility::kPublicInput, Visibility::kPrivateInput, Visibility::kInternal,
                 Visibility::kOutput}) {
    if (circuit::visibility_name(v) == s) return v;
  }
  format_error("unknown visibility '" + s + "'");
}

Json sparse_to_json(const SparseVector& row) {
  Json out = Json::array();
  for (const auto& [wire, coeff] : row) out.push_back(Json::array({wire, coeff.to_hex()}));
  return out;
}

SparseVector sparse_from_json(const PrimeField& f, const Json& j) {
  if (!j.is_array()) format_error("sparse row must be an array");
  SparseVector row;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned()) {
      format_error("sparse entry must be [wire, coefficient]");
    }
    row.emplace_back(entry[0].get<std::size_t>(), field_element_from_json(f, entry[1]));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].second.is_zero() || (i > 0 && row[i - 1].first >= row[i].first)) {
      format_error("sparse row must be sorted by wire with nonzero coefficients");
    }
  }
  return row;
}

Json poly_to_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(c.to_hex());
  return out;
}

Polynomial poly_from_json(const PrimeField& f, const Json& j) {
  if (!j.is_array()) format_error("polynomial must be an array of coefficients");
  std::vector<FieldElement> coeffs;
  for (const auto& c : j) coeffs.push_back(field_element_from_json(f, c));
  Polynomial p(f, std::move(coeffs));
  if (p.size() != j.size()) format_error("polynomial has trailing zero coefficients");
  return p;
}

Json group_array(const std::vector<pairing::GroupElement>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x.to_text());
  return out;
}

pairing::GroupElement group_from_json(const pairing::Backend& be, const Json& j) {
  if (!j.is_string()) format_error("group element must be a string");
  return be.from_text(j.get<std::string>());
}

std::vector<pairing::GroupElement> group_array_from_json(const pairing::Backend& be,
                                                        const Json& obj, const char* key) {
  std::vector<pairing::GroupElement> out;
  for (const auto& x : array_member(obj, key)) out.push_back(group_from_json(be, x));
  return out;
}

const PrimeField& parse_field(const Json& doc) {
  std::string hex = string_member(doc, "field");
  mpz_class modulus;
  if (hex.empty() || modulus.set_str(hex, 16) != 0) format_error("field modulus must be hex");
  return PrimeField::get(modulus);
}

}  // namespace

Json make_envelope(const Envelope& e) {
  return Json{{"format", "zkit"},
              {"version", kFormatVersion},
              {"kind", e.kind},
              {"field", e.field->modulus_hex()},
              {"backend", e.backend},
              {"digest", e.digest},
              {"payload", e.payload}};
}

Envelope open_envelope(const Json& doc, std::string_view expected_kind) {
  if (!doc.is_object()) format_error("document must be a JSON object");
  if (string_member(doc, "format") != "zkit") format_error("not a zkit document");
  const Json& version = member(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    format_error("unsupported format version");
  }
  Envelope e;
  e.kind = string_member(doc, "kind");
  if (e.kind != expected_kind) {
    format_error("expected a " + std::string(expected_kind) + " document, found " + e.kind);
  }
  e.field = &parse_field(doc);
  e.backend = string_member(doc, "backend");
  e.digest = string_member(doc, "digest");
  e.payload = member(doc, "payload");
  return e;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string dump_line(const Json& doc) { return doc.dump() + "\n"; }

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    format_error(std::string("invalid JSON: ") + e.what());
  }
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

Json to_json(const FieldElement& x) { return x.to_hex(); }

FieldElement field_element_from_json(const PrimeField& f, const Json& j) {
  if (!j.is_string()) format_error("field element must be a hex string");
  return f.from_hex(j.get<std::string>());
}

Json cs_payload(const ConstraintSystem& cs) {
  Json wires = Json::array();
  for (const auto& w : cs.wires()) {
    wires.push_back(Json{{"name", w.name}, {"visibility", circuit::visibility_name(w.visibility)}});
  }
  Json rows = Json::array();
  for (const auto& r : cs.rows()) {
    rows.push_back(Json{{"a", sparse_to_json(r.a)}, {"b", sparse_to_json(r.b)}, {"c", sparse_to_json(r.c)}});
  }
  return Json{{"wires", wires}, {"constraints", rows}};
}

ConstraintSystem cs_from_payload(const PrimeField& f, const Json& payload) {
  std::vector<WireInfo> wires;
  for (const auto& w : array_member(payload, "wires")) {
    wires.push_back({string_member(w, "name"), parse_visibility(string_member(w, "visibility"))});
  }
  std::vector<circuit::Constraint> rows;
  for (const auto& r : array_member(payload, "constraints")) {
    rows.push_back({sparse_from_json(f, member(r, "a")), sparse_from_json(f, member(r, "b")),
                    sparse_from_json(f, member(r, "c"))});
  }
  return ConstraintSystem(f, std::move(wires), std::move(rows));
}

std::string save_constraint_system(const ConstraintSystem& cs) {
  return dump(make_envelope({kind::kConstraintSystem, &cs.field(), "",
                             pinocchio::circuit_digest(cs), cs_payload(cs)}));
}

ConstraintSystem load_constraint_system(std::string_view text) {
  Envelope e = open_envelope(parse(text), kind::kConstraintSystem);
  ConstraintSystem cs = cs_from_payload(*e.field, e.payload);
  if (pinocchio::circuit_digest(cs) != e.digest) format_error("constraint system digest does not match");
  return cs;
}

std::string save_qap(const Qap& qap, std::size_t max_dense_entries) {
  const auto& cs = qap.constraint_system();
  Json payload{{"constraint_system", cs_payload(cs)}, {"t", poly_to_json(qap.t())}};
  if (qap.num_wires() * qap.num_constraints() <= max_dense_entries) {
    Json u = Json::array(), v = Json::array(), w = Json::array();
    for (std::size_t i = 0; i < qap.num_wires(); ++i) {
      u.push_back(poly_to_json(qap.u(i)));
      v.push_back(poly_to_json(qap.v(i)));
      w.push_back(poly_to_json(qap.w(i)));
    }
    payload["u"] = std::move(u);
    payload["v"] = std::move(v);
    payload["w"] = std::move(w);
  }
  return dump(make_envelope({kind::kQap, &qap.field(), "", pinocchio::circuit_digest(cs), payload}));
}

Qap load_qap(std::string_view text) {
  Json doc = parse(text);
  if (doc.is_object() && doc.contains("kind") && doc["kind"] == kind::kConstraintSystem) {
    return Qap(load_constraint_system(text));
  }
  Envelope e = open_envelope(doc, kind::kQap);
  Qap qap(cs_from_payload(*e.field, member(e.payload, "constraint_system")));
  if (pinocchio::circuit_digest(qap.constraint_system()) != e.digest) {
    format_error("QAP digest does not match its constraint system");
  }
  if (poly_from_json(*e.field, member(e.payload, "t")) != qap.t()) {
    format_error("QAP target polynomial does not match its constraint system");
  }
  if (e.payload.contains("u")) {
    const Json& u = array_member(e.payload, "u");
    const Json& v = array_member(e.payload, "v");
    const Json& w = array_member(e.payload, "w");
    if (u.size() != qap.num_wires() || v.size() != qap.num_wires() || w.size() != qap.num_wires()) {
      format_error("QAP coefficient arrays have the wrong length");
    }
    for (std::size_t i = 0; i < qap.num_wires(); ++i) {
      if (poly_from_json(*e.field, u[i]) != qap.u(i) || poly_from_json(*e.field, v[i]) != qap.v(i) ||
          poly_from_json(*e.field, w[i]) != qap.w(i)) {
        format_error("QAP polynomials of wire " + std::to_string(i) +
                     " do not match its constraint system");
      }
    }
  }
  return qap;
}

std::string save_witness(const circuit::Witness& w) {
  Json values = Json::array();
  for (const auto& x : w.values()) values.push_back(x.to_hex());
  return dump(make_envelope({kind::kWitness, &w.field(), "", "", Json{{"values", values}}}));
}

circuit::Witness load_witness(std::string_view text) {
  Envelope e = open_envelope(parse(text), kind::kWitness);
  std::vector<FieldElement> values;
  for (const auto& x : array_member(e.payload, "values")) {
    values.push_back(field_element_from_json(*e.field, x));
  }
  return circuit::Witness(*e.field, std::move(values));
}

circuit::InputMap parse_inputs(const PrimeField& f, std::string_view text) {
  Json doc = parse(text);
  if (!doc.is_object()) format_error("inputs must be a JSON object of name -> value");
  circuit::InputMap out;
  for (const auto& [name, value] : doc.items()) {
    if (value.is_string()) {
      out.emplace(name, f.parse(value.get<std::string>()));
    } else if (value.is_number_integer()) {
      out.emplace(name, f.element(value.get<std::int64_t>()));
    } else {
      format_error("input '" + name + "' must be an integer or a numeric string");
    }
  }
  return out;
}

const pairing::Backend& backend_from_descriptor(const PrimeField& f, std::string_view descriptor) {
  const pairing::Backend* be = nullptr;
  if (descriptor == "transparent") {
    be = &pairing::TransparentBackend::get(f);
  } else if (descriptor.starts_with("curve:")) {
    be = &pairing::CurveBackend::get(f);
  } else {
    format_error("unknown backend descriptor '" + std::string(descriptor) + "'");
  }
  if (be->descriptor() != descriptor) {
    format_error("backend descriptor '" + std::string(descriptor) + "' does not match field " +
                 f.modulus_hex());
  }
  return *be;
}

std::string save_evaluation_key(const pinocchio::EvaluationKey& ek) {
  const auto& be = ek.backend();
  Json payload{{"powers", group_array(ek.powers)},
               {"alpha_powers", group_array(ek.alpha_powers)},
               {"u", group_array(ek.u)},
               {"alpha_u", group_array(ek.alpha_u)},
               {"beta_u", group_array(ek.beta_u)},
               {"v", group_array(ek.v)},
               {"alpha_v", group_array(ek.alpha_v)},
               {"beta_v", group_array(ek.beta_v)},
               {"w", group_array(ek.w)},
               {"alpha_w", group_array(ek.alpha_w)},
               {"beta_w", group_array(ek.beta_w)},
               {"t", ek.t.to_text()},
               {"alpha_t", ek.alpha_t.to_text()},
               {"beta_u_t", ek.beta_u_t.to_text()},
               {"beta_v_t", ek.beta_v_t.to_text()},
               {"beta_w_t", ek.beta_w_t.to_text()}};
  return dump(make_envelope(
      {kind::kEvaluationKey, &be.scalar_field(), be.descriptor(), ek.digest, payload}));
}

pinocchio::EvaluationKey load_evaluation_key(std::string_view text) {
  Envelope e = open_envelope(parse(text), kind::kEvaluationKey);
  const auto& be = backend_from_descriptor(*e.field, e.backend);
  const Json& p = e.payload;
  auto one = [&](const char* key) { return group_from_json(be, member(p, key)); };
  auto many = [&](const char* key) { return group_array_from_json(be, p, key); };
  pinocchio::EvaluationKey ek{e.digest,       many("powers"),  many("alpha_powers"), many("u"),
                              many("alpha_u"), many("beta_u"), many("v"),            many("alpha_v"),
                              many("beta_v"), many("w"),       many("alpha_w"),      many("beta_w"),
                              one("t"),       one("alpha_t"),  one("beta_u_t"),      one("beta_v_t"),
                              one("beta_w_t")};
  const std::size_t n = ek.u.size();
  for (const auto* family : {&ek.alpha_u, &ek.beta_u, &ek.v, &ek.alpha_v, &ek.beta_v, &ek.w,
                             &ek.alpha_w, &ek.beta_w}) {
    if (family->size() != n) format_error("evaluation key wire families differ in length");
  }
  if (ek.powers.size() != ek.alpha_powers.size() || ek.powers.empty()) {
    format_error("evaluation key power lists are inconsistent");
  }
  return ek;
}

std::string save_verification_key(const pinocchio::VerificationKey& vk) {
  const auto& be = vk.backend();
  Json payload{{"one", vk.one.to_text()},
               {"alpha", vk.alpha.to_text()},
               {"t", vk.t.to_text()},
               {"gamma", vk.gamma.to_text()},
               {"beta_u_gamma", vk.beta_u_gamma.to_text()},
               {"beta_v_gamma", vk.beta_v_gamma.to_text()},
               {"beta_w_gamma", vk.beta_w_gamma.to_text()}};
  return dump(make_envelope(
      {kind::kVerificationKey, &be.scalar_field(), be.descriptor(), vk.digest, payload}));
}

pinocchio::VerificationKey load_verification_key(std::string_view text) {
  Envelope e = open_envelope(parse(text), kind::kVerificationKey);
  const auto& be = backend_from_descriptor(*e.field, e.backend);
  auto one = [&](const char* key) { return group_from_json(be, member(e.payload, key)); };
  pinocchio::VerificationKey vk{e.digest,   one("one"),          one("alpha"),
                                one("t"),   one("gamma"),        one("beta_u_gamma"),
                                one("beta_v_gamma"), one("beta_w_gamma")};
  if (vk.one != be.generator()) format_error("verification key E(1) is not the group generator");
  return vk;
}

std::string save_proof(const pinocchio::Proof& proof) {
  const auto& be = proof.backend();
  Json elements = Json::object();
  auto values = proof.elements();
  for (std::size_t i = 0; i < pinocchio::Proof::kElementCount; ++i) {
    elements[pinocchio::Proof::kElementNames[i]] = values[i].to_text();
  }
  return dump(make_envelope({kind::kProof, &be.scalar_field(), be.descriptor(), proof.digest,
                             Json{{"elements", elements}}}));
}

pinocchio::Proof load_proof(std::string_view text) {
  Envelope e = open_envelope(parse(text), kind::kProof);
  const auto& be = backend_from_descriptor(*e.field, e.backend);
  const Json& elements = member(e.payload, "elements");
  if (!elements.is_object() || elements.size() != pinocchio::Proof::kElementCount) {
    format_error("a proof has exactly 9 group elements");
  }
  std::vector<pairing::GroupElement> xs;
  for (const char* name : pinocchio::Proof::kElementNames) {
    xs.push_back(group_from_json(be, member(elements, name)));
  }
  return pinocchio::Proof::from_elements(
      e.digest, {xs[0], xs[1], xs[2], xs[3], xs[4], xs[5], xs[6], xs[7], xs[8]});
}

}  // namespace io

std::string pinocchio::circuit_digest(const circuit::ConstraintSystem& cs) {
  return io::sha256_hex(cs.field().modulus_hex() + "\n" + io::cs_payload(cs).dump());
}

}  // namespace zkit
