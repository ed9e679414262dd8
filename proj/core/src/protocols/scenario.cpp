#include "zkit/protocols/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "zkit/gadgets/circuits.hpp"

namespace zkit::protocols {
namespace {

using io::Json;

[[noreturn]] void bad_scenario(const std::string& msg) {
  throw Error(Errc::kFormatError, "scenario: " + msg);
}

std::string get_str(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad_scenario(std::string("missing string '") + key + "'");
  return it->get<std::string>();
}

std::uint64_t get_u64(const Json& j, const char* key, std::optional<std::uint64_t> fallback = {}) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    bad_scenario(std::string("missing number '") + key + "'");
  }
  if (!it->is_number_unsigned()) bad_scenario(std::string("'") + key + "' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

FieldElement get_fe(const PrimeField& f, const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad_scenario(std::string("missing '") + key + "'");
  if (it->is_number_unsigned()) return f.element(mpz_class(std::to_string(it->get<std::uint64_t>())));
  if (!it->is_string()) bad_scenario(std::string("'") + key + "' must be a number or string");
  std::string s = it->get<std::string>();
  mpz_class v;
  int rc = s.starts_with("0x") ? v.set_str(s.substr(2), 16) : v.set_str(s, 10);
  if (rc != 0 || v < 0) bad_scenario("'" + s + "' is not an integer");
  return f.element(v);
}

FieldElement from_u64(const PrimeField& f, std::uint64_t v) {
  return f.element(mpz_class(std::to_string(v)));
}

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

struct Bidder {
  FieldElement account, salt, leaf, tag;
  std::uint64_t funds;
};

struct Player {
  FieldElement seed;
  std::vector<std::uint64_t> hand;
  std::optional<std::uint64_t> drawn;  // accepted draw not yet placed in the hand
  std::optional<std::uint64_t> card;   // accepted draw not yet compared
  std::optional<std::pair<FieldElement, pinocchio::Proof>> last_update;
};

class Runner {
 public:
  Runner(const Json& scenario, const ScenarioOptions& options)
      : scenario_(scenario), options_(options), f_(*options.field), rng_(options.seed) {
    kind_ = get_str(scenario, "kind");
    if (kind_ != "auction" && kind_ != "cards") bad_scenario("unknown kind '" + kind_ + "'");
    config_.field = &f_;
    config_.backend = options.backend;
    config_.seed = options.seed;
    config_.tree_depth = get_u64(scenario, "tree_depth", 16);
    config_.hand_size = get_u64(scenario, "hand_size", 3);
    if (auto it = scenario.find("auction"); it != scenario.end()) {
      config_.auction.auction_id = get_u64(*it, "id", 1);
      config_.auction.entry_stake = get_u64(*it, "entry_stake", 50);
      config_.auction.settlement_deadline = get_u64(*it, "settlement_deadline", 3);
    }
    ledger_ = std::make_unique<Ledger>(config_);
    load_participants();
  }

  ScenarioReport run() {
    ScenarioReport report;
    report.kind = kind_;
    const Json& steps = scenario_.at("steps");
    if (!steps.is_array()) bad_scenario("'steps' must be an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const Json& step = steps[i];
      StepOutcome out{i, get_str(step, "op"), step.value("who", std::string()),
                      step.value("expect", std::string("ok")), "ok", ""};
      bool proof_step = false;
      try {
        proof_step = perform(step, out.detail);
      } catch (const Error& e) {
        out.actual = std::string(errc_name(e.code()));
        if (e.code() == Errc::kFormatError && !ledger_rejected_) throw;
      }
      ledger_rejected_ = false;
      if (out.met()) {
        if (out.actual == "ok" && proof_step) ++report.proofs_verified;
        if (out.expected != "ok") ++report.attacks_rejected;
      }
      report.steps.push_back(std::move(out));
    }
    report.log = ledger_->log();
    report.final_digest = ledger_->state_digest();
    report.final_state = ledger_->state_json();
    if (options_.replay) {
      try {
        Ledger again = Ledger::replay(config_, report.log, ledger_->shared_authority());
        report.replay_matches = again.state_digest() == report.final_digest;
      } catch (const Error& e) {
        report.replay_matches = false;
        report.replay_error = e.what();
      }
    } else {
      report.replay_matches = true;
    }
    report.audit = audit_log(report.log, secrets_);
    return report;
  }

 private:
  void load_participants() {
    const auto auction_id = from_u64(f_, config_.auction.auction_id);
    if (auto it = scenario_.find("participants"); it != scenario_.end()) {
      for (const Json& p : *it) {
        std::string name = get_str(p, "name");
        FieldElement account = get_fe(f_, p, "account");
        FieldElement salt = get_fe(f_, p, "salt");
        std::uint64_t funds = get_u64(p, "funds");
        FieldElement leaf = gadgets::mimc_hash({account, from_u64(f_, funds), salt});
        bidders_.emplace(name, Bidder{account, salt, leaf, gadgets::mimc_hash({leaf, auction_id}),
                                      funds});
        secrets_.push_back({name + ".account", account});
        secrets_.push_back({name + ".salt", salt});
        secrets_.push_back({name + ".funds", from_u64(f_, funds)});
      }
    }
    if (auto it = scenario_.find("players"); it != scenario_.end()) {
      for (const Json& p : *it) {
        std::string name = get_str(p, "name");
        FieldElement seed = get_fe(f_, p, "seed");
        players_.emplace(name, Player{seed, std::vector<std::uint64_t>(config_.hand_size, 0),
                                      std::nullopt, std::nullopt, std::nullopt});
        secrets_.push_back({name + ".seed", seed});
      }
    }
  }

  Bidder& bidder(const std::string& name) {
    auto it = bidders_.find(name);
    if (it == bidders_.end()) bad_scenario("unknown participant '" + name + "'");
    return it->second;
  }

  Player& player(const std::string& name) {
    auto it = players_.find(name);
    if (it == players_.end()) bad_scenario("unknown player '" + name + "'");
    return it->second;
  }

  // Runs a ledger call, remembering the block hash it was built against.
  template <typename Fn>
  void submit(Fn&& fn) {
    FieldElement before = ledger_->prev_block_hash();
    ledger_rejected_ = true;
    try {
      fn();
    } catch (...) {
      last_hash_ = before;
      throw;
    }
    ledger_rejected_ = false;
    last_hash_ = before;
  }

  void note_secret(const std::string& label, std::uint64_t v) {
    if (v != 0) secrets_.push_back({label, from_u64(f_, v)});
  }

  // Returns true if the step carried a proof.
  bool perform(const Json& step, std::string& detail) {
    const std::string op = get_str(step, "op");
    const std::string who = step.value("who", std::string());
    Ledger& L = *ledger_;

    if (op == "tick") return submit([&] { L.tick(); }), false;
    if (op == "start_bidding") return submit([&] { L.start_bidding(); }), false;
    if (op == "close_bidding") return submit([&] { L.close_bidding(); }), false;
    if (op == "expire") return submit([&] { L.expire_settlement(); }), false;
    if (op == "start_game") return submit([&] { L.start_game(); }), false;
    if (op == "finish_game") return submit([&] { L.finish_game(); }), false;
    if (op == "raise_stake") {
      submit([&] { L.raise_entry_stake(get_u64(step, "stake")); });
      return false;
    }
    if (op == "add_stake") {
      submit([&] { L.add_stake(who, get_u64(step, "amount")); });
      return false;
    }
    if (op == "register") {
      const Bidder& b = bidder(who);
      FieldElement leaf = step.contains("leaf_of") ? bidder(get_str(step, "leaf_of")).leaf : b.leaf;
      std::uint64_t stake = get_u64(step, "stake", L.entry_stake());
      submit([&] { L.register_bidder(who, leaf, stake); });
      return false;
    }
    if (op == "bid") return bid(step, who, detail);
    if (op == "settle") {
      std::uint64_t due = 0;
      if (!L.bids().empty()) {
        std::uint64_t win = L.bids().back().amount;
        auto st = L.stakes().find(who);
        std::uint64_t stake = st == L.stakes().end() ? 0 : st->second;
        due = win > stake ? win - stake : 0;
      }
      std::uint64_t payment = get_u64(step, "payment", due);
      submit([&] { L.settle_auction(who, payment); });
      detail = "paid " + std::to_string(payment);
      return false;
    }
    if (op == "commit_seed") {
      FieldElement commit = gadgets::mimc_hash({player(who).seed});
      submit([&] { L.commit_seed(who, commit); });
      return false;
    }
    if (op == "draw") return draw(step, who, detail);
    if (op == "compare") return compare(step, who, detail);
    if (op == "update_hand") return update_hand(step, who, detail);
    bad_scenario("unknown op '" + op + "'");
  }

  bool bid(const Json& step, const std::string& who, std::string& detail) {
    Ledger& L = *ledger_;
    const Bidder& b = bidder(who);
    std::uint64_t amount = get_u64(step, "amount");
    auto index = L.leaf_index(b.leaf);
    if (!index) bad_scenario("'" + who + "' bids without a registered leaf");
    auto path = L.tree().path(*index);
    circuit::InputMap priv{{"leaf", b.leaf},
                           {"account", b.account},
                           {"value", from_u64(f_, b.funds)},
                           {"salt", b.salt},
                           {"bid", from_u64(f_, amount)}};
    for (std::size_t i = 0; i < path.elements.size(); ++i) {
      priv.emplace(indexed("pathElements", i), path.elements[i]);
      priv.emplace(indexed("pathIndices", i), f_.element(path.indices[i]));
    }
    Statement claimed = L.bid_statement(amount, b.tag);
    pinocchio::Proof proof = step.value("forge", false)
                                 ? forge(claimed, priv)
                                 : prove_statement(L.authority(), claimed, priv, rng_);
    submit([&] { L.submit_bid(who, amount, b.tag, proof); });
    detail = "bid " + std::to_string(amount);
    return true;
  }

  // Same circuit and inputs as `claimed`, outputs replaced by what the
  // witness actually computes.
  pinocchio::Proof forge(const Statement& claimed, const circuit::InputMap& priv) {
    KeyAuthority& A = ledger_->authority();
    circuit::InputMap all = claimed.inputs;
    for (const auto& [k, v] : priv) all.insert_or_assign(k, v);
    auto w = A.witness(claimed.circuit, all);
    Statement honest = claimed;
    for (auto& [name, value] : honest.outputs) value = A.wire(claimed.circuit, w, name);
    return forge_statement(A, claimed, honest, priv);
  }

  bool draw(const Json& step, const std::string& who, std::string& detail) {
    Ledger& L = *ledger_;
    KeyAuthority& A = L.authority();
    Player& p = player(who);
    // Seeds are swapped: each player draws with the opponent's seed.
    const FieldElement& seed =
        step.value("own_seed", false) ? p.seed : player(L.seed_source(who)).seed;
    FieldElement blockhash = step.value("stale", false) ? last_hash_.value() : L.prev_block_hash();
    auto w = A.witness(CircuitId::kCardDraw, {{"seed", seed}, {"blockhash", blockhash}});
    FieldElement card_commit = A.wire(CircuitId::kCardDraw, w, "cardCommit");
    FieldElement seed_commit = A.wire(CircuitId::kCardDraw, w, "seedCommit");
    std::uint64_t card = A.wire(CircuitId::kCardDraw, w, "card").to_mpz().get_ui();
    Statement s{CircuitId::kCardDraw, {{"blockhash", blockhash}},
                {{"cardCommit", card_commit}, {"seedCommit", seed_commit}}};
    auto proof = prove_statement(A, s, {{"seed", seed}}, rng_);
    submit([&] { L.draw_card(who, card_commit, seed_commit, proof); });
    note_secret(who + ".card", card);
    p.drawn = card;
    p.card = card;
    detail = "card committed";
    return true;
  }

  bool compare(const Json& step, const std::string& who, std::string& detail) {
    Ledger& L = *ledger_;
    Player& p = player(who);
    if (!p.card) bad_scenario("'" + who + "' compares without a drawn card");
    std::uint64_t dealer = get_u64(step, "dealer_card");
    int outcome = *p.card < dealer ? 1 : 0;
    // "as": submit under another player's name, i.e. against their commitment.
    std::string as = step.value("as", who);
    Statement s{CircuitId::kCardCompare,
                {{"playerCardCommit", gadgets::mimc_hash({from_u64(f_, *p.card)})},
                 {"dealerCard", from_u64(f_, dealer)}},
                {{"outCardCommit", gadgets::mimc_hash({from_u64(f_, *p.card)})},
                 {"outValid", f_.element(outcome)}}};
    circuit::InputMap priv{{"playerCard", from_u64(f_, *p.card)}};
    pinocchio::Proof proof = [&] {
      if (!step.contains("claim")) return prove_statement(L.authority(), s, priv, rng_);
      Statement claimed = s;
      outcome = static_cast<int>(get_u64(step, "claim"));
      claimed.outputs.insert_or_assign("outValid", f_.element(outcome));
      return forge(claimed, priv);
    }();
    int result = -1;
    submit([&] { result = L.play_and_compare(as, dealer, outcome, proof); });
    if (as == who) p.card.reset();
    detail = "outValid " + std::to_string(result);
    return true;
  }

  bool update_hand(const Json& step, const std::string& who, std::string& detail) {
    Ledger& L = *ledger_;
    Player& p = player(who);
    if (step.value("replay", false)) {
      if (!p.last_update) bad_scenario("'" + who + "' has no earlier hand update to replay");
      auto [commit, proof] = *p.last_update;
      submit([&] { L.update_hand(who, commit, proof); });
      return true;
    }
    std::vector<std::uint64_t> next = p.hand;
    std::uint64_t drawn = p.drawn.value_or(0);
    if (p.drawn) {
      auto slot = std::find(next.begin(), next.end(), 0);
      if (slot == next.end()) bad_scenario("'" + who + "' has a full hand");
      *slot = drawn;
    }
    auto commit_of = [&](const std::vector<std::uint64_t>& hand) {
      std::vector<FieldElement> xs;
      for (auto v : hand) xs.push_back(from_u64(f_, v));
      return gadgets::hand_commitment(xs);
    };
    circuit::InputMap priv{{"drawn", from_u64(f_, drawn)}};
    for (std::size_t i = 0; i < next.size(); ++i) {
      priv.emplace(indexed("oldHand", i), from_u64(f_, p.hand[i]));
      priv.emplace(indexed("newHand", i), from_u64(f_, next[i]));
    }
    FieldElement new_commit = commit_of(next);
    Statement honest = L.hand_statement(who, new_commit);
    pinocchio::Proof proof = [&] {
      if (!step.contains("fabricate")) return prove_statement(L.authority(), honest, priv, rng_);
      std::vector<std::uint64_t> fake = step.at("fabricate").get<std::vector<std::uint64_t>>();
      if (fake.size() != next.size()) bad_scenario("fabricated hand has the wrong size");
      new_commit = commit_of(fake);
      return forge_statement(L.authority(), L.hand_statement(who, new_commit), honest, priv);
    }();
    submit([&] { L.update_hand(who, new_commit, proof); });
    p.hand = next;
    p.drawn.reset();
    p.last_update = std::pair{new_commit, proof};
    detail = "hand commitment updated";
    return true;
  }

  const Json& scenario_;
  ScenarioOptions options_;
  const PrimeField& f_;
  Rng rng_;
  std::string kind_;
  LedgerConfig config_;
  std::unique_ptr<Ledger> ledger_;
  std::map<std::string, Bidder> bidders_;
  std::map<std::string, Player> players_;
  std::vector<Secret> secrets_;
  std::optional<FieldElement> last_hash_;
  bool ledger_rejected_ = false;
};

void collect_strings(const Json& j, std::vector<std::string>& out) {
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_structured()) {
    for (const auto& child : j) collect_strings(child, out);
  }
}

}  // namespace

bool ScenarioReport::passed() const {
  return replay_matches && audit.empty() &&
         std::all_of(steps.begin(), steps.end(), [](const StepOutcome& s) { return s.met(); });
}

io::Json ScenarioReport::to_json() const {
  Json steps_json = Json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"index", s.index}, {"op", s.op}, {"who", s.who},
                          {"expected", s.expected}, {"actual", s.actual}, {"detail", s.detail},
                          {"met", s.met()}});
  }
  Json findings = Json::array();
  for (const auto& a : audit) findings.push_back({{"line", a.line}, {"secret", a.secret_label}});
  return Json{{"kind", kind},
              {"passed", passed()},
              {"steps", steps_json},
              {"proofs_verified", proofs_verified},
              {"attacks_rejected", attacks_rejected},
              {"replay_matches", replay_matches},
              {"replay_error", replay_error},
              {"audit_findings", findings},
              {"final_digest", final_digest}};
}

ScenarioReport run_scenario(const io::Json& scenario, const ScenarioOptions& options) {
  ScenarioOptions opt = options;
  if (!opt.field) opt.field = &PrimeField::preset("bn254-scalar");
  if (!scenario.is_object() || !scenario.contains("steps")) bad_scenario("needs 'kind' and 'steps'");
  Runner runner(scenario, opt);
  return runner.run();
}

ScenarioReport run_scenario_text(std::string_view text, const ScenarioOptions& options) {
  return run_scenario(io::parse(text), options);
}

std::vector<AuditFinding> audit_log(std::string_view log, const std::vector<Secret>& secrets) {
  std::vector<AuditFinding> findings;
  std::istringstream in{std::string(log)};
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    std::vector<std::string> strings;
    collect_strings(io::parse(line), strings);
    std::set<std::string> seen(strings.begin(), strings.end());
    for (const auto& s : secrets) {
      if (seen.contains(s.value.to_hex()) || seen.contains(s.value.to_mpz().get_str()) ||
          seen.contains("0x" + s.value.to_hex())) {
        findings.push_back({n, s.label});
      }
    }
  }
  return findings;
}

}  // namespace zkit::protocols
