#pragma once

// Scripted protocol runs. A scenario file lists participants with their
// private data and the operations to perform in order; the runner plays
// every client (honest or adversarial, as the step says) against one
// ledger and records whether each step met its expectation.
//
// Auction scenario:
//   {"kind": "auction",
//    "auction": {"id": 7, "entry_stake": 50, "settlement_deadline": 3},
//    "participants": [{"name": "alice", "account": "0x51", "funds": 700, "salt": "0x99"}, ...],
//    "steps": [{"op": "register", "who": "alice"},
//              {"op": "bid", "who": "alice", "amount": 100},
//              {"op": "bid", "who": "carol", "amount": 900, "forge": true,
//               "expect": "InvalidProof"}, ...]}
//
// Card scenario:
//   {"kind": "cards", "hand_size": 3,
//    "players": [{"name": "alice", "seed": "0x1234"}, ...],
//    "steps": [{"op": "commit_seed", "who": "alice"}, {"op": "draw", "who": "alice"},
//              {"op": "update_hand", "who": "bob", "fabricate": [3, 7, 6],
//               "expect": "InvalidProof"}, ...]}
//
// "expect" defaults to "ok"; otherwise it names the error the ledger must
// raise. Step-specific keys are documented in docs/protocols.md.

#include <string>
#include <vector>

#include "zkit/protocols/ledger.hpp"

namespace zkit::protocols {

struct StepOutcome {
  std::size_t index;
  std::string op;
  std::string who;
  std::string expected;
  std::string actual;  // "ok" or an error name
  std::string detail;

  bool met() const { return expected == actual; }
};

struct AuditFinding {
  std::size_t line;
  std::string secret_label;
};

struct ScenarioReport {
  std::string kind;
  std::vector<StepOutcome> steps;
  std::string log;
  std::string final_digest;
  io::Json final_state;
  std::size_t proofs_verified = 0;
  std::size_t attacks_rejected = 0;
  bool replay_matches = false;
  std::string replay_error;
  std::vector<AuditFinding> audit;

  bool passed() const;
  io::Json to_json() const;
};

struct ScenarioOptions {
  const PrimeField* field = nullptr;  // default bn254-scalar
  pairing::BackendKind backend = pairing::BackendKind::kTransparent;
  std::uint64_t seed = 1;
  /// Replay the log on a fresh ledger (sharing cached keys) and compare.
  bool replay = true;
};

/// Throws FormatError on a malformed scenario.
ScenarioReport run_scenario(const io::Json& scenario, const ScenarioOptions& options);
ScenarioReport run_scenario_text(std::string_view text, const ScenarioOptions& options);

struct Secret {
  std::string label;
  FieldElement value;
};

/// Scans every string in every record of an event log for the hex or
/// decimal form of each secret. Field elements are always serialized as
/// strings, so a stored private value shows up as an exact string match;
/// counters and coin amounts are JSON numbers and public by construction.
std::vector<AuditFinding> audit_log(std::string_view log, const std::vector<Secret>& secrets);

}  // namespace zkit::protocols
