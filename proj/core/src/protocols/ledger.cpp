#include "zkit/protocols/ledger.hpp"

#include <sstream>

namespace zkit::protocols {
namespace {

using io::Json;

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

std::string str(const Json& op, const char* key) {
  auto it = op.find(key);
  if (it == op.end() || !it->is_string()) fail(Errc::kFormatError, std::string("missing '") + key + "'");
  return it->get<std::string>();
}

std::uint64_t num(const Json& op, const char* key) {
  auto it = op.find(key);
  if (it == op.end() || !it->is_number_unsigned()) {
    fail(Errc::kFormatError, std::string("missing or negative '") + key + "'");
  }
  return it->get<std::uint64_t>();
}

FieldElement fe(const PrimeField& f, const Json& op, const char* key) {
  auto it = op.find(key);
  if (it == op.end()) fail(Errc::kFormatError, std::string("missing '") + key + "'");
  return io::field_element_from_json(f, *it);
}

pinocchio::Proof proof_of(const Json& op) {
  auto it = op.find("proof");
  if (it == op.end()) fail(Errc::kFormatError, "missing 'proof'");
  return io::load_proof(io::dump(*it));
}

Json proof_json(const pinocchio::Proof& p) { return io::parse(io::save_proof(p)); }

}  // namespace

std::string_view auction_phase_name(AuctionPhase p) {
  switch (p) {
    case AuctionPhase::kRegistration: return "registration";
    case AuctionPhase::kBidding: return "bidding";
    case AuctionPhase::kSettlement: return "settlement";
    case AuctionPhase::kClosed: return "closed";
  }
  return "unknown";
}

std::string_view game_phase_name(GamePhase p) {
  switch (p) {
    case GamePhase::kSetup: return "setup";
    case GamePhase::kPlaying: return "playing";
    case GamePhase::kFinished: return "finished";
  }
  return "unknown";
}

AuthorityConfig LedgerConfig::authority() const {
  return AuthorityConfig{.field = field,
                         .backend = backend,
                         .seed = seed,
                         .tree_depth = tree_depth,
                         .hand_size = hand_size};
}

FieldElement hash_to_field64(const PrimeField& f, std::string_view data) {
  return f.element(mpz_class(io::sha256_hex(data).substr(0, 16), 16));
}

Ledger::Ledger(const LedgerConfig& config, std::shared_ptr<KeyAuthority> authority)
    : config_(config),
      authority_(authority ? std::move(authority)
                           : std::make_shared<KeyAuthority>(config.authority())),
      log_digest_(io::sha256_hex("zkit ledger genesis")),
      prev_block_hash_(hash_to_field64(*config.field, "0:" + log_digest_)),
      tree_(*config.field, config.tree_depth),
      entry_stake_(config.auction.entry_stake) {
  if (&authority_->field() != config.field || authority_->config().backend != config.backend ||
      authority_->config().seed != config.seed ||
      authority_->config().tree_depth != config.tree_depth ||
      authority_->config().hand_size != config.hand_size) {
    fail(Errc::kDimensionMismatch, "shared key authority was built for another configuration");
  }
}

std::optional<std::size_t> Ledger::leaf_index(const FieldElement& leaf) const {
  auto it = leaf_index_.find(leaf.to_hex());
  if (it == leaf_index_.end()) return std::nullopt;
  return it->second;
}

const PlayerState& Ledger::player(const std::string& name) const {
  auto it = players_.find(name);
  if (it == players_.end()) fail(Errc::kUnknownPlayer, "no player '" + name + "'");
  return it->second;
}

PlayerState& Ledger::player_mut(const std::string& name) {
  auto it = players_.find(name);
  if (it == players_.end()) fail(Errc::kUnknownPlayer, "no player '" + name + "'");
  return it->second;
}

const std::string& Ledger::seed_source(const std::string& name) const {
  player(name);
  for (const auto& [other, _] : players_) {
    if (other != name) return other;
  }
  fail(Errc::kUnknownPlayer, "'" + name + "' has no opponent");
}

FieldElement Ledger::empty_hand_commit() const {
  std::vector<FieldElement> empty(config_.hand_size, field().zero());
  return gadgets::mimc_hash(empty);
}

void Ledger::require_auction_phase(AuctionPhase p, std::string_view what) const {
  if (auction_phase_ != p) {
    fail(Errc::kWrongPhase, std::string(what) + " needs phase " +
                                std::string(auction_phase_name(p)) + ", auction is in " +
                                std::string(auction_phase_name(auction_phase_)));
  }
}

void Ledger::require_game_phase(GamePhase p, std::string_view what) const {
  if (game_phase_ != p) {
    fail(Errc::kWrongPhase, std::string(what) + " needs game phase " +
                                std::string(game_phase_name(p)) + ", game is in " +
                                std::string(game_phase_name(game_phase_)));
  }
}

// ---- statements ----------------------------------------------------------

Statement Ledger::bid_statement(std::uint64_t amount, const FieldElement& bidder_tag) const {
  const PrimeField& f = field();
  return Statement{CircuitId::kBid,
                   {{"root", root()}, {"auctionId", f.element(mpz_class(std::to_string(config_.auction.auction_id)))}},
                   {{"finalBid", f.element(mpz_class(std::to_string(amount)))},
                    {"outValid", f.zero()},
                    {"bidderTag", bidder_tag}}};
}

Statement Ledger::draw_statement(const FieldElement& card_commit,
                                 const FieldElement& seed_commit) const {
  return Statement{CircuitId::kCardDraw,
                   {{"blockhash", prev_block_hash_}},
                   {{"cardCommit", card_commit}, {"seedCommit", seed_commit}}};
}

Statement Ledger::compare_statement(const std::string& name, std::uint64_t dealer_card,
                                    int outcome) const {
  const auto& p = player(name);
  if (!p.card_commit) fail(Errc::kWrongPhase, "'" + name + "' holds no drawn card");
  const PrimeField& f = field();
  return Statement{CircuitId::kCardCompare,
                   {{"playerCardCommit", *p.card_commit},
                    {"dealerCard", f.element(mpz_class(std::to_string(dealer_card)))}},
                   {{"outCardCommit", *p.card_commit}, {"outValid", f.element(outcome)}}};
}

Statement Ledger::hand_statement(const std::string& name, const FieldElement& new_commit) const {
  const auto& p = player(name);
  FieldElement drawn = p.pending_insert ? *p.pending_insert : gadgets::mimc_hash({field().zero()});
  return Statement{CircuitId::kHandUpdate,
                   {{"oldCommit", p.hand_commit},
                    {"newCommit", new_commit},
                    {"drawnCommit", drawn},
                    {"rho", prev_block_hash_}},
                   {}};
}

// ---- public operations ---------------------------------------------------

void Ledger::register_bidder(const std::string& participant, const FieldElement& leaf,
                             std::uint64_t stake) {
  execute({{"op", "register"}, {"participant", participant}, {"leaf", io::to_json(leaf)},
           {"stake", stake}});
}
void Ledger::start_bidding() { execute({{"op", "start_bidding"}}); }
void Ledger::raise_entry_stake(std::uint64_t s) { execute({{"op", "raise_stake"}, {"stake", s}}); }
void Ledger::add_stake(const std::string& participant, std::uint64_t amount) {
  execute({{"op", "add_stake"}, {"participant", participant}, {"amount", amount}});
}
void Ledger::submit_bid(const std::string& sender, std::uint64_t amount,
                        const FieldElement& bidder_tag, const pinocchio::Proof& proof) {
  execute({{"op", "bid"}, {"sender", sender}, {"amount", amount},
           {"bidder_tag", io::to_json(bidder_tag)}, {"proof", proof_json(proof)}});
}
void Ledger::close_bidding() { execute({{"op", "close_bidding"}}); }
void Ledger::settle_auction(const std::string& payer, std::uint64_t payment) {
  execute({{"op", "settle"}, {"payer", payer}, {"payment", payment}});
}
void Ledger::expire_settlement() { execute({{"op", "expire"}}); }
void Ledger::tick() { execute({{"op", "tick"}}); }

void Ledger::commit_seed(const std::string& player, const FieldElement& seed_commit) {
  execute({{"op", "commit_seed"}, {"player", player}, {"seed_commit", io::to_json(seed_commit)}});
}
void Ledger::start_game() { execute({{"op", "start_game"}}); }
void Ledger::draw_card(const std::string& player, const FieldElement& card_commit,
                       const FieldElement& seed_commit, const pinocchio::Proof& proof) {
  execute({{"op", "draw"}, {"player", player}, {"card_commit", io::to_json(card_commit)},
           {"seed_commit", io::to_json(seed_commit)}, {"proof", proof_json(proof)}});
}
int Ledger::play_and_compare(const std::string& player, std::uint64_t dealer_card, int outcome,
                             const pinocchio::Proof& proof) {
  Json r = execute({{"op", "compare"}, {"player", player}, {"dealer_card", dealer_card},
                    {"outcome", static_cast<std::uint64_t>(outcome)}, {"proof", proof_json(proof)}});
  return r.at("outcome").get<int>();
}
void Ledger::update_hand(const std::string& player, const FieldElement& new_commit,
                         const pinocchio::Proof& proof) {
  execute({{"op", "update_hand"}, {"player", player}, {"new_commit", io::to_json(new_commit)},
           {"proof", proof_json(proof)}});
}
void Ledger::finish_game() { execute({{"op", "finish_game"}}); }

// ---- execution -----------------------------------------------------------

Json Ledger::execute(Json op) {
  // Normalize through text so live calls and replays see identical JSON types.
  op = io::parse(op.dump());
  Json record{{"height", height_ + 1}, {"op", op}};
  std::optional<Error> error;
  Json result;
  try {
    result = dispatch(op);
  } catch (const Error& e) {
    error = e;
  }
  if (error) {
    record["status"] = "rejected";
    record["error"] = std::string(errc_name(error->code()));
  } else {
    record["status"] = "ok";
    if (!result.is_null()) record["result"] = result;
  }
  advance(record);
  if (error) throw *error;
  return result;
}

void Ledger::advance(const Json& body) {
  ++height_;
  log_digest_ = io::sha256_hex(log_digest_ + io::dump_line(body));
  prev_block_hash_ = hash_to_field64(field(), std::to_string(height_) + ":" + log_digest_);
  Json record = body;
  record["block_hash"] = io::to_json(prev_block_hash_);
  record["state_digest"] = state_digest();
  log_ += io::dump_line(io::make_envelope(io::Envelope{io::kind::kEvent, &field(),
                                                       authority_->backend().descriptor(), "",
                                                       std::move(record)}));
}

Json Ledger::dispatch(const Json& op) {
  if (!op.is_object()) fail(Errc::kFormatError, "operation must be an object");
  const std::string name = str(op, "op");
  if (name == "register") return do_register(op);
  if (name == "start_bidding") return do_start_bidding(op);
  if (name == "raise_stake") return do_raise_stake(op);
  if (name == "add_stake") return do_add_stake(op);
  if (name == "bid") return do_bid(op);
  if (name == "close_bidding") return do_close_bidding(op);
  if (name == "settle") return do_settle(op);
  if (name == "expire") return do_expire(op);
  if (name == "tick") return nullptr;
  if (name == "commit_seed") return do_commit_seed(op);
  if (name == "start_game") return do_start_game(op);
  if (name == "draw") return do_draw(op);
  if (name == "compare") return do_compare(op);
  if (name == "update_hand") return do_update_hand(op);
  if (name == "finish_game") return do_finish_game(op);
  fail(Errc::kFormatError, "unknown operation '" + name + "'");
}

Json Ledger::do_register(const Json& op) {
  require_auction_phase(AuctionPhase::kRegistration, "register");
  std::string who = str(op, "participant");
  FieldElement leaf = fe(field(), op, "leaf");
  std::uint64_t stake = num(op, "stake");
  if (stakes_.contains(who)) fail(Errc::kDuplicateLeaf, "'" + who + "' is already registered");
  if (leaf_index(leaf)) fail(Errc::kDuplicateLeaf, "leaf is already in the tree");
  if (stake < entry_stake_) {
    fail(Errc::kInsufficientStake, "stake " + std::to_string(stake) + " below entry stake " +
                                       std::to_string(entry_stake_));
  }
  std::size_t index = tree_.append(leaf);
  leaf_index_.emplace(leaf.to_hex(), index);
  stakes_[who] = stake;
  return Json{{"index", index}, {"root", io::to_json(root())}};
}

Json Ledger::do_start_bidding(const Json&) {
  require_auction_phase(AuctionPhase::kRegistration, "start_bidding");
  auction_phase_ = AuctionPhase::kBidding;
  return nullptr;
}

Json Ledger::do_raise_stake(const Json& op) {
  if (auction_phase_ != AuctionPhase::kRegistration && auction_phase_ != AuctionPhase::kBidding) {
    fail(Errc::kWrongPhase, "entry stake is fixed once bidding closes");
  }
  std::uint64_t s = num(op, "stake");
  if (s < entry_stake_) fail(Errc::kInsufficientStake, "entry stake can only be raised");
  entry_stake_ = s;
  return nullptr;
}

Json Ledger::do_add_stake(const Json& op) {
  if (auction_phase_ != AuctionPhase::kRegistration && auction_phase_ != AuctionPhase::kBidding) {
    fail(Errc::kWrongPhase, "stakes are fixed once bidding closes");
  }
  std::string who = str(op, "participant");
  std::uint64_t amount = num(op, "amount");
  auto it = stakes_.find(who);
  if (it == stakes_.end()) fail(Errc::kUnknownPlayer, "'" + who + "' is not registered");
  it->second += amount;
  return Json{{"stake", it->second}};
}

Json Ledger::do_bid(const Json& op) {
  require_auction_phase(AuctionPhase::kBidding, "bid");
  std::string sender = str(op, "sender");
  std::uint64_t amount = num(op, "amount");
  FieldElement tag = fe(field(), op, "bidder_tag");
  auto stake = stakes_.find(sender);
  if (stake == stakes_.end()) fail(Errc::kUnknownPlayer, "'" + sender + "' is not registered");
  if (stake->second < entry_stake_) {
    fail(Errc::kInsufficientStake, "'" + sender + "' must top up to the raised entry stake");
  }
  pinocchio::Proof proof = proof_of(op);
  if (!verify_statement(*authority_, bid_statement(amount, tag), proof)) {
    fail(Errc::kInvalidProof, "bid proof does not verify");
  }
  if (!bids_.empty() && amount <= bids_.back().amount) {
    fail(Errc::kBidTooLow, std::to_string(amount) + " does not beat " +
                               std::to_string(bids_.back().amount));
  }
  if (!bids_.empty() && bids_.back().bidder_tag == tag) {
    fail(Errc::kSameBidderTwice, "the previous bid came from the same bidder");
  }
  std::string digest = io::sha256_hex(io::save_proof(proof));
  bids_.push_back(BidRecord{amount, sender, tag, digest, height_ + 1});
  return Json{{"proof_digest", digest}};
}

Json Ledger::do_close_bidding(const Json&) {
  require_auction_phase(AuctionPhase::kBidding, "close_bidding");
  if (bids_.empty()) {
    for (auto& [who, s] : stakes_) refunds_[who] += std::exchange(s, 0);
    auction_phase_ = AuctionPhase::kClosed;
    return nullptr;
  }
  deadline_ = height_ + 1 + config_.auction.settlement_deadline;
  auction_phase_ = AuctionPhase::kSettlement;
  return Json{{"winner", bids_.back().sender}, {"amount", bids_.back().amount},
              {"deadline", *deadline_}};
}

Json Ledger::do_settle(const Json& op) {
  require_auction_phase(AuctionPhase::kSettlement, "settle");
  std::string payer = str(op, "payer");
  std::uint64_t payment = num(op, "payment");
  if (height_ + 1 > *deadline_) fail(Errc::kDeadlinePassed, "settlement deadline has passed");
  const BidRecord& win = bids_.back();
  if (payer != win.sender) fail(Errc::kWrongPayer, "'" + payer + "' did not win");
  std::uint64_t stake = stakes_.at(payer);
  std::uint64_t due = win.amount > stake ? win.amount - stake : 0;
  if (payment != due) {
    fail(Errc::kWrongPayment, "payment must be " + std::to_string(due));
  }
  proceeds_ = win.amount;
  if (stake > win.amount) refunds_[payer] += stake - win.amount;
  stakes_[payer] = 0;
  for (auto& [who, s] : stakes_) {
    if (who != payer) refunds_[who] += std::exchange(s, 0);
  }
  auction_phase_ = AuctionPhase::kClosed;
  return nullptr;
}

Json Ledger::do_expire(const Json&) {
  require_auction_phase(AuctionPhase::kSettlement, "expire");
  if (height_ + 1 <= *deadline_) fail(Errc::kWrongPhase, "settlement deadline not reached");
  const std::string& winner = bids_.back().sender;
  for (auto& [who, s] : stakes_) {
    if (who == winner) {
      slashed_ += std::exchange(s, 0);
    } else {
      refunds_[who] += std::exchange(s, 0);
    }
  }
  auction_phase_ = AuctionPhase::kClosed;
  return Json{{"slashed", slashed_}};
}

Json Ledger::do_commit_seed(const Json& op) {
  require_game_phase(GamePhase::kSetup, "commit_seed");
  std::string who = str(op, "player");
  FieldElement commit = fe(field(), op, "seed_commit");
  if (players_.contains(who)) fail(Errc::kDuplicateCommit, "'" + who + "' already committed");
  if (players_.size() == 2) fail(Errc::kWrongPhase, "the game seats two players");
  players_.emplace(who, PlayerState{commit, empty_hand_commit(), std::nullopt, std::nullopt, {}});
  return nullptr;
}

Json Ledger::do_start_game(const Json&) {
  require_game_phase(GamePhase::kSetup, "start_game");
  if (players_.size() != 2) fail(Errc::kWrongPhase, "the game needs two committed players");
  game_phase_ = GamePhase::kPlaying;
  return nullptr;
}

Json Ledger::do_draw(const Json& op) {
  require_game_phase(GamePhase::kPlaying, "draw");
  std::string who = str(op, "player");
  FieldElement card = fe(field(), op, "card_commit");
  FieldElement seed = fe(field(), op, "seed_commit");
  PlayerState& p = player_mut(who);
  if (p.pending_insert) fail(Errc::kWrongPhase, "'" + who + "' must place the last card first");
  if (seed != player(seed_source(who)).seed_commit) {
    fail(Errc::kSeedCommitMismatch, "seed commitment does not match the committed seed");
  }
  if (!verify_statement(*authority_, draw_statement(card, seed), proof_of(op))) {
    fail(Errc::kInvalidProof, "draw proof does not verify");
  }
  p.card_commit = card;
  p.pending_insert = card;
  return nullptr;
}

Json Ledger::do_compare(const Json& op) {
  require_game_phase(GamePhase::kPlaying, "compare");
  std::string who = str(op, "player");
  std::uint64_t dealer = num(op, "dealer_card");
  std::uint64_t outcome = num(op, "outcome");
  if (outcome > 1) fail(Errc::kFormatError, "outcome must be 0 or 1");
  Statement s = compare_statement(who, dealer, static_cast<int>(outcome));
  if (!verify_statement(*authority_, s, proof_of(op))) {
    fail(Errc::kInvalidProof, "compare proof does not verify");
  }
  PlayerState& p = player_mut(who);
  p.outcomes.push_back(static_cast<int>(outcome));
  p.card_commit.reset();
  return Json{{"outcome", outcome}};
}

Json Ledger::do_update_hand(const Json& op) {
  require_game_phase(GamePhase::kPlaying, "update_hand");
  std::string who = str(op, "player");
  FieldElement next = fe(field(), op, "new_commit");
  Statement s = hand_statement(who, next);
  if (!verify_statement(*authority_, s, proof_of(op))) {
    fail(Errc::kInvalidProof, "hand update proof does not verify");
  }
  PlayerState& p = player_mut(who);
  p.hand_commit = next;
  p.pending_insert.reset();
  return nullptr;
}

Json Ledger::do_finish_game(const Json&) {
  require_game_phase(GamePhase::kPlaying, "finish_game");
  game_phase_ = GamePhase::kFinished;
  Json tally = Json::object();
  for (const auto& [who, p] : players_) {
    int below = 0;
    for (int o : p.outcomes) below += o;
    tally[who] = Json{{"rounds", p.outcomes.size()}, {"below_dealer", below}};
  }
  return tally;
}

// ---- state ---------------------------------------------------------------

Json Ledger::state_json() const {
  Json bids = Json::array();
  for (const auto& b : bids_) {
    bids.push_back({{"amount", b.amount}, {"sender", b.sender},
                    {"bidder_tag", io::to_json(b.bidder_tag)},
                    {"proof_digest", b.proof_digest}, {"height", b.height}});
  }
  Json players = Json::object();
  auto opt = [](const std::optional<FieldElement>& x) -> Json {
    return x ? io::to_json(*x) : Json(nullptr);
  };
  for (const auto& [who, p] : players_) {
    players[who] = {{"seed_commit", io::to_json(p.seed_commit)},
                    {"hand_commit", io::to_json(p.hand_commit)},
                    {"card_commit", opt(p.card_commit)},
                    {"pending_insert", opt(p.pending_insert)},
                    {"outcomes", p.outcomes}};
  }
  return Json{{"height", height_},
              {"block_hash", io::to_json(prev_block_hash_)},
              {"log_digest", log_digest_},
              {"tree", {{"root", io::to_json(root())}, {"leaves", tree_.size()}}},
              {"auction",
               {{"phase", auction_phase_name(auction_phase_)},
                {"entry_stake", entry_stake_},
                {"stakes", stakes_},
                {"refunds", refunds_},
                {"proceeds", proceeds_},
                {"slashed", slashed_},
                {"bids", bids},
                {"deadline", deadline_ ? Json(*deadline_) : Json(nullptr)}}},
              {"game", {{"phase", game_phase_name(game_phase_)}, {"players", players}}}};
}

std::string Ledger::state_digest() const { return io::sha256_hex(io::dump(state_json())); }

Ledger Ledger::replay(const LedgerConfig& config, std::string_view log,
                      std::shared_ptr<KeyAuthority> authority) {
  Ledger ledger(config, std::move(authority));
  std::istringstream in{std::string(log)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    io::Envelope env = io::open_envelope(io::parse(line), io::kind::kEvent);
    const Json& rec = env.payload;
    if (!rec.is_object() || !rec.contains("op") || !rec.contains("status")) {
      fail(Errc::kFormatError, "malformed event record");
    }
    const std::uint64_t h = ledger.height_ + 1;
    std::string status = "ok", error;
    try {
      ledger.execute(rec.at("op"));
    } catch (const Error& e) {
      status = "rejected";
      error = errc_name(e.code());
    }
    auto diverged = [&](const std::string& what) {
      fail(Errc::kReplayDiverged, "replay diverged at height " + std::to_string(h) + ": " + what);
    };
    if (rec.value("height", std::uint64_t{0}) != h) diverged("height");
    if (rec.at("status") != status) diverged("status " + status);
    if (rec.value("error", std::string()) != error) diverged("error " + error);
    if (rec.value("block_hash", std::string()) != ledger.prev_block_hash_.to_hex()) {
      diverged("block hash");
    }
    if (rec.value("state_digest", std::string()) != ledger.state_digest()) {
      diverged("state digest");
    }
  }
  return ledger;
}

}  // namespace zkit::protocols
