#pragma once

// Canonical text serialization. Every artifact is one JSON document
//
//   {"format": "zkit", "version": 1, "kind": ..., "field": <modulus hex>,
//    "backend": <descriptor or "">, "digest": <circuit digest or "">,
//    "payload": {...}}
//
// with sorted keys, two-space indentation and a trailing newline, so equal
// artifacts serialize to identical bytes. Field elements are lowercase hex
// without prefix; group elements use Backend::to_text.

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "zkit/circuit/r1cs.hpp"
#include "zkit/pinocchio.hpp"
#include "zkit/qap.hpp"

namespace zkit::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace kind {
inline constexpr const char* kConstraintSystem = "constraint-system";
inline constexpr const char* kQap = "qap";
inline constexpr const char* kWitness = "witness";
inline constexpr const char* kEvaluationKey = "evaluation-key";
inline constexpr const char* kVerificationKey = "verification-key";
inline constexpr const char* kProof = "proof";
inline constexpr const char* kEvent = "event";
}  // namespace kind

struct Envelope {
  std::string kind;
  const PrimeField* field = nullptr;
  std::string backend;  // descriptor, empty when not applicable
  std::string digest;   // circuit digest, empty when not applicable
  Json payload;
};

Json make_envelope(const Envelope& e);
/// Validates the header. Throws FormatError on a malformed document, a
/// foreign format tag, an unsupported version or an unexpected kind.
Envelope open_envelope(const Json& doc, std::string_view expected_kind);

/// Canonical text form of a document.
std::string dump(const Json& doc);
/// Single-line canonical form, for line-delimited logs.
std::string dump_line(const Json& doc);
/// Throws FormatError on invalid JSON.
Json parse(std::string_view text);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

Json to_json(const FieldElement& x);
FieldElement field_element_from_json(const PrimeField& f, const Json& j);

Json cs_payload(const circuit::ConstraintSystem& cs);
circuit::ConstraintSystem cs_from_payload(const PrimeField& f, const Json& payload);

std::string save_constraint_system(const circuit::ConstraintSystem& cs);
circuit::ConstraintSystem load_constraint_system(std::string_view text);

/// Includes dense coefficient arrays for u_i, v_i, w_i when
/// n * m <= max_dense_entries; the constraint system (the Lagrange form) is
/// always present. Loading checks that the two agree.
std::string save_qap(const Qap& qap, std::size_t max_dense_entries = std::size_t{1} << 20);
/// Accepts a QAP file or a constraint-system file.
Qap load_qap(std::string_view text);

std::string save_witness(const circuit::Witness& w);
circuit::Witness load_witness(std::string_view text);

/// Input assignment as a flat JSON object {"name": "decimal or 0x-hex"}.
circuit::InputMap parse_inputs(const PrimeField& f, std::string_view text);

std::string save_evaluation_key(const pinocchio::EvaluationKey& ek);
pinocchio::EvaluationKey load_evaluation_key(std::string_view text);
std::string save_verification_key(const pinocchio::VerificationKey& vk);
pinocchio::VerificationKey load_verification_key(std::string_view text);
std::string save_proof(const pinocchio::Proof& proof);
pinocchio::Proof load_proof(std::string_view text);

/// The backend named by a descriptor over `f`. Throws FormatError if the
/// descriptor does not match what the toolkit derives for `f`.
const pairing::Backend& backend_from_descriptor(const PrimeField& f, std::string_view descriptor);

}  // namespace zkit::io
