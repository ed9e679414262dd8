#pragma once

// In-memory ledger hosting one sealed-bid auction and one two-player card
// game, with an append-only event log.
//
// Every operation, accepted or rejected, is one block: it is appended to the
// log as a single-line record and advances the hash chain
//
//   log_digest_h     = SHA-256(log_digest_{h-1} || record_h)
//   prev_block_hash  = first 8 bytes of SHA-256(h || log_digest_h), as a field element
//
// Records hold only public data (leaves, commitments, amounts, proofs), so
// replaying a log from genesis reproduces every state digest and re-verifies
// every proof.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zkit/gadgets/merkle.hpp"
#include "zkit/protocols/keys.hpp"
#include "zkit/serialize.hpp"

namespace zkit::protocols {

enum class AuctionPhase { kRegistration, kBidding, kSettlement, kClosed };
enum class GamePhase { kSetup, kPlaying, kFinished };
std::string_view auction_phase_name(AuctionPhase p);
std::string_view game_phase_name(GamePhase p);

struct AuctionParams {
  std::uint64_t auction_id = 1;
  std::uint64_t entry_stake = 50;
  /// Blocks the winner has to pay after bidding closes.
  std::uint64_t settlement_deadline = 3;
};

struct LedgerConfig {
  const PrimeField* field = nullptr;
  pairing::BackendKind backend = pairing::BackendKind::kTransparent;
  std::uint64_t seed = 0;  // trusted-setup randomness
  std::size_t tree_depth = 16;
  std::size_t hand_size = 3;
  AuctionParams auction;

  AuthorityConfig authority() const;
};

struct BidRecord {
  std::uint64_t amount;
  std::string sender;
  FieldElement bidder_tag;
  std::string proof_digest;
  std::uint64_t height;
};

struct PlayerState {
  FieldElement seed_commit;
  FieldElement hand_commit;
  std::optional<FieldElement> card_commit;     // latest drawn card
  std::optional<FieldElement> pending_insert;  // drawn, not yet in the hand
  std::vector<int> outcomes;                   // outValid of each comparison
};

class Ledger {
 public:
  /// A fresh authority is created unless one is shared in (replay reuses the
  /// original's cached keys).
  explicit Ledger(const LedgerConfig& config, std::shared_ptr<KeyAuthority> authority = nullptr);

  const LedgerConfig& config() const { return config_; }
  const PrimeField& field() const { return *config_.field; }
  KeyAuthority& authority() { return *authority_; }
  std::shared_ptr<KeyAuthority> shared_authority() const { return authority_; }

  std::uint64_t height() const { return height_; }
  const FieldElement& prev_block_hash() const { return prev_block_hash_; }
  const gadgets::MerkleTree& tree() const { return tree_; }
  FieldElement root() const { return tree_.root(); }
  std::optional<std::size_t> leaf_index(const FieldElement& leaf) const;

  AuctionPhase auction_phase() const { return auction_phase_; }
  std::uint64_t entry_stake() const { return entry_stake_; }
  const std::map<std::string, std::uint64_t>& stakes() const { return stakes_; }
  const std::map<std::string, std::uint64_t>& refunds() const { return refunds_; }
  std::uint64_t proceeds() const { return proceeds_; }
  std::uint64_t slashed() const { return slashed_; }
  const std::vector<BidRecord>& bids() const { return bids_; }
  std::optional<std::uint64_t> settlement_deadline() const { return deadline_; }

  GamePhase game_phase() const { return game_phase_; }
  const std::map<std::string, PlayerState>& players() const { return players_; }
  const PlayerState& player(const std::string& name) const;
  /// Whose committed seed `name` draws with: the opponent (seeds are swapped
  /// privately between the two players).
  const std::string& seed_source(const std::string& name) const;

  /// What the ledger will check for each kind of submission. Clients prove
  /// exactly these statements.
  Statement bid_statement(std::uint64_t amount, const FieldElement& bidder_tag) const;
  Statement draw_statement(const FieldElement& card_commit, const FieldElement& seed_commit) const;
  Statement compare_statement(const std::string& player, std::uint64_t dealer_card,
                              int outcome) const;
  Statement hand_statement(const std::string& player, const FieldElement& new_commit) const;

  // Auction. Each throws the listed protocol errors; a rejected call is still
  // logged and still advances the chain.
  void register_bidder(const std::string& participant, const FieldElement& leaf,
                       std::uint64_t stake);                       // DuplicateLeaf InsufficientStake WrongPhase TreeFull
  void start_bidding();                                            // WrongPhase
  void raise_entry_stake(std::uint64_t new_stake);                 // WrongPhase InsufficientStake
  void add_stake(const std::string& participant, std::uint64_t amount);  // UnknownPlayer WrongPhase
  void submit_bid(const std::string& sender, std::uint64_t amount, const FieldElement& bidder_tag,
                  const pinocchio::Proof& proof);  // WrongPhase UnknownPlayer InsufficientStake InvalidProof BidTooLow SameBidderTwice
  void close_bidding();                            // WrongPhase
  void settle_auction(const std::string& payer, std::uint64_t payment);  // WrongPhase DeadlinePassed WrongPayer WrongPayment
  /// After the deadline: slash the winner's stake, refund everyone else.
  void expire_settlement();  // WrongPhase
  /// An empty block.
  void tick();

  // Card game.
  void commit_seed(const std::string& player, const FieldElement& seed_commit);  // WrongPhase DuplicateCommit
  void start_game();  // WrongPhase
  void draw_card(const std::string& player, const FieldElement& card_commit,
                 const FieldElement& seed_commit, const pinocchio::Proof& proof);  // WrongPhase UnknownPlayer SeedCommitMismatch InvalidProof
  /// Returns the proven outcome (outValid = card < dealer card).
  int play_and_compare(const std::string& player, std::uint64_t dealer_card, int outcome,
                       const pinocchio::Proof& proof);  // WrongPhase UnknownPlayer InvalidProof
  void update_hand(const std::string& player, const FieldElement& new_commit,
                   const pinocchio::Proof& proof);  // WrongPhase UnknownPlayer InvalidProof
  void finish_game();                               // WrongPhase

  /// SHA-256 of the canonical state document.
  std::string state_digest() const;
  io::Json state_json() const;
  const std::string& log() const { return log_; }

  /// Re-executes every record of `log` on a fresh ledger and checks status,
  /// error, state digest and block hash of each. Throws ReplayDiverged on
  /// the first difference and FormatError on a malformed record.
  static Ledger replay(const LedgerConfig& config, std::string_view log,
                       std::shared_ptr<KeyAuthority> authority = nullptr);

 private:
  io::Json execute(io::Json op);
  io::Json dispatch(const io::Json& op);
  void advance(const io::Json& record_body);

  io::Json do_register(const io::Json& op);
  io::Json do_start_bidding(const io::Json& op);
  io::Json do_raise_stake(const io::Json& op);
  io::Json do_add_stake(const io::Json& op);
  io::Json do_bid(const io::Json& op);
  io::Json do_close_bidding(const io::Json& op);
  io::Json do_settle(const io::Json& op);
  io::Json do_expire(const io::Json& op);
  io::Json do_commit_seed(const io::Json& op);
  io::Json do_start_game(const io::Json& op);
  io::Json do_draw(const io::Json& op);
  io::Json do_compare(const io::Json& op);
  io::Json do_update_hand(const io::Json& op);
  io::Json do_finish_game(const io::Json& op);

  PlayerState& player_mut(const std::string& name);
  void require_auction_phase(AuctionPhase p, std::string_view what) const;
  void require_game_phase(GamePhase p, std::string_view what) const;
  FieldElement empty_hand_commit() const;

  LedgerConfig config_;
  std::shared_ptr<KeyAuthority> authority_;

  std::uint64_t height_ = 0;
  std::string log_digest_;
  FieldElement prev_block_hash_;
  std::string log_;

  gadgets::MerkleTree tree_;
  std::map<std::string, std::size_t> leaf_index_;  // leaf hex -> index
  AuctionPhase auction_phase_ = AuctionPhase::kRegistration;
  std::uint64_t entry_stake_;
  std::map<std::string, std::uint64_t> stakes_, refunds_;
  std::uint64_t proceeds_ = 0, slashed_ = 0;
  std::vector<BidRecord> bids_;
  std::optional<std::uint64_t> deadline_;

  GamePhase game_phase_ = GamePhase::kSetup;
  std::map<std::string, PlayerState> players_;
};

/// Truncated SHA-256 of `data` as a field element (8 bytes, big-endian).
FieldElement hash_to_field64(const PrimeField& f, std::string_view data);

}  // namespace zkit::protocols
