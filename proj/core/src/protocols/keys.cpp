#include "zkit/protocols/keys.hpp"

#include "zkit/gadgets/circuits.hpp"
#include "zkit/serialize.hpp"

namespace zkit::protocols {

std::string_view circuit_id_name(CircuitId id) {
  switch (id) {
    case CircuitId::kBid: return "bid";
    case CircuitId::kCardDraw: return "card-draw";
    case CircuitId::kCardCompare: return "card-compare";
    case CircuitId::kHandUpdate: return "hand-update";
  }
  return "unknown";
}

circuit::InputMap Statement::pinned() const {
  circuit::InputMap all = inputs;
  for (const auto& [k, v] : outputs) all.insert_or_assign(k, v);
  return all;
}

std::string Statement::digest() const {
  std::string text(circuit_id_name(circuit));
  for (const auto& [k, v] : pinned()) text += "\n" + k + "=" + v.to_hex();
  return io::sha256_hex(text);
}

KeyAuthority::KeyAuthority(const AuthorityConfig& config)
    : config_(config), backend_(&pairing::backend(config.backend, *config.field)) {
  const PrimeField& f = *config.field;
  auto add = [&](CircuitId id, circuit::CircuitAst ast) {
    auto cs = circuit::flatten(ast);
    circuits_.emplace(id, std::make_unique<Compiled>(Compiled{std::move(ast), std::move(cs)}));
  };
  add(CircuitId::kBid, gadgets::bid_verifier_circuit(f, {.depth = config.tree_depth,
                                                          .value_bits = config.value_bits,
                                                          .salted = true,
                                                          .tagged = true}));
  add(CircuitId::kCardDraw, gadgets::card_draw_circuit(f));
  add(CircuitId::kCardCompare, gadgets::card_compare_circuit(f));
  add(CircuitId::kHandUpdate, gadgets::hand_permutation_circuit(f, config.hand_size));
}

const circuit::CircuitAst& KeyAuthority::circuit(CircuitId id) const {
  return circuits_.at(id)->ast;
}

const circuit::ConstraintSystem& KeyAuthority::constraint_system(CircuitId id) const {
  return circuits_.at(id)->cs;
}

const PreparedStatement& KeyAuthority::prepare(const Statement& s) {
  const std::string digest = s.digest();
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(digest); it != cache_.end()) return *it->second;
  }
  auto spec = circuit::specialize(constraint_system(s.circuit), s.pinned());
  Qap qap(spec.cs);
  Rng rng(seed_from_label(digest, config_.seed));
  auto keys = pinocchio::setup(*backend_, qap, rng);
  auto prepared = std::make_unique<PreparedStatement>(
      PreparedStatement{std::move(spec), std::move(qap), std::move(keys)});
  std::lock_guard lock(mu_);
  auto [it, fresh] = cache_.emplace(digest, std::move(prepared));
  return *it->second;
}

std::size_t KeyAuthority::setups_performed() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

circuit::Witness KeyAuthority::witness(CircuitId id, const circuit::InputMap& inputs) const {
  return circuit::eval_witness(circuit(id), inputs);
}

FieldElement KeyAuthority::wire(CircuitId id, const circuit::Witness& w,
                                std::string_view name) const {
  auto index = constraint_system(id).wire_index(name);
  if (!index) throw Error(Errc::kUnknownSignal, "no wire '" + std::string(name) + "'");
  return w[*index];
}

namespace {

circuit::Witness full_witness(KeyAuthority& authority, const Statement& s,
                              const circuit::InputMap& private_inputs) {
  circuit::InputMap all = s.inputs;
  for (const auto& [k, v] : private_inputs) all.insert_or_assign(k, v);
  auto w = authority.witness(s.circuit, all);
  for (const auto& [name, claimed] : s.outputs) {
    if (authority.wire(s.circuit, w, name) != claimed) {
      throw Error(Errc::kNotSatisfying, "claimed output '" + name + "' does not hold");
    }
  }
  return w;
}

}  // namespace

pinocchio::Proof prove_statement(KeyAuthority& authority, const Statement& s,
                                 const circuit::InputMap& private_inputs, Rng& rng) {
  auto w = full_witness(authority, s, private_inputs);
  const auto& prepared = authority.prepare(s);
  return pinocchio::prove_zk(prepared.keys.ek, prepared.qap,
                             circuit::project(w, prepared.spec.kept), rng);
}

pinocchio::Proof forge_statement(KeyAuthority& authority, const Statement& claimed,
                                 const Statement& honest,
                                 const circuit::InputMap& private_inputs) {
  if (claimed.circuit != honest.circuit) {
    throw Error(Errc::kDimensionMismatch, "forge: statements name different circuits");
  }
  auto w = full_witness(authority, honest, private_inputs);
  const auto& prepared = authority.prepare(claimed);
  return pinocchio::prove_unchecked(prepared.keys.ek, prepared.qap,
                                    circuit::project(w, prepared.spec.kept));
}

bool verify_statement(KeyAuthority& authority, const Statement& s, const pinocchio::Proof& proof) {
  const auto& prepared = authority.prepare(s);
  try {
    return pinocchio::verify(prepared.keys.vk, proof);
  } catch (const Error& e) {
    if (e.code() == Errc::kDigestMismatch || e.code() == Errc::kBackendMismatch) return false;
    throw;
  }
}

}  // namespace zkit::protocols
