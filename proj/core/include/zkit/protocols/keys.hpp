#pragma once

// Statements and the trusted-setup authority behind the ledger.
//
// Every ledger check is "this proof verifies for circuit C with these public
// wires pinned". Pinning goes through circuit::specialize, so each distinct
// statement has its own QAP and keys. The authority runs that setup once
// per statement, seeded from (authority seed, statement digest), so any
// party replaying the log derives identical keys.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "zkit/circuit/r1cs.hpp"
#include "zkit/pinocchio.hpp"

namespace zkit::protocols {

enum class CircuitId { kBid, kCardDraw, kCardCompare, kHandUpdate };
std::string_view circuit_id_name(CircuitId id);

struct Statement {
  CircuitId circuit;
  circuit::InputMap inputs;   // public inputs fixed by the verifier
  circuit::InputMap outputs;  // public outputs claimed by the prover

  circuit::InputMap pinned() const;
  /// SHA-256 over the circuit name and the pinned values.
  std::string digest() const;
};

struct PreparedStatement {
  circuit::Specialization spec;
  Qap qap;
  pinocchio::KeyPair keys;
};

struct AuthorityConfig {
  const PrimeField* field = nullptr;
  pairing::BackendKind backend = pairing::BackendKind::kTransparent;
  std::uint64_t seed = 0;
  std::size_t tree_depth = 16;
  std::size_t hand_size = 3;
  std::size_t value_bits = 11;
};

class KeyAuthority {
 public:
  /// Throws IncompatibleField if the field cannot host the card circuits.
  explicit KeyAuthority(const AuthorityConfig& config);

  const AuthorityConfig& config() const { return config_; }
  const PrimeField& field() const { return *config_.field; }
  const pairing::Backend& backend() const { return *backend_; }

  const circuit::CircuitAst& circuit(CircuitId id) const;
  const circuit::ConstraintSystem& constraint_system(CircuitId id) const;

  /// Specializes, reduces and sets up on first use; later calls hit a cache.
  const PreparedStatement& prepare(const Statement& s);
  std::size_t setups_performed() const;

  /// Full witness of an unspecialized circuit; `inputs` must cover every
  /// input signal.
  circuit::Witness witness(CircuitId id, const circuit::InputMap& inputs) const;
  FieldElement wire(CircuitId id, const circuit::Witness& w, std::string_view name) const;

 private:
  struct Compiled {
    circuit::CircuitAst ast;
    circuit::ConstraintSystem cs;
  };

  AuthorityConfig config_;
  const pairing::Backend* backend_;
  std::map<CircuitId, std::unique_ptr<Compiled>> circuits_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<PreparedStatement>> cache_;
};

/// Honest client: evaluates the circuit on statement inputs plus
/// `private_inputs`, checks the claimed outputs, then proves with random
/// shifts. Throws NotSatisfying if the claim does not hold.
pinocchio::Proof prove_statement(KeyAuthority& authority, const Statement& s,
                                 const circuit::InputMap& private_inputs, Rng& rng);

/// Adversarial client: a witness computed for `honest` (which must hold),
/// pushed through the honest prover algorithm against the keys of `claimed`.
/// Used by attack scenarios; the result should never verify.
pinocchio::Proof forge_statement(KeyAuthority& authority, const Statement& claimed,
                                 const Statement& honest, const circuit::InputMap& private_inputs);

bool verify_statement(KeyAuthority& authority, const Statement& s, const pinocchio::Proof& proof);

}  // namespace zkit::protocols
