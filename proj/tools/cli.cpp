#include "cli.hpp"

#ifdef ZKIT_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zkit/circuit/parser.hpp"
#include "zkit/gadgets/circuits.hpp"
#include "zkit/pinocchio.hpp"
#include "zkit/protocols/scenario.hpp"
#include "zkit/serialize.hpp"

#ifndef ZKIT_SCENARIO_DIR
#define ZKIT_SCENARIO_DIR "scenarios"
#endif

namespace zkit::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct Options {
  std::string field = "bn254-scalar";
  std::string backend = "transparent";
  std::uint64_t seed = 1;
  std::string out = ".";
  bool json = false;

  // command arguments
  std::string circuit, qap, ek, vk, proof, inputs, demo_kind, scenario;
  std::vector<std::string> pins;
  bool zk = false;
  bool replay = true;
};

/// Error raised by the tool itself (bad paths, bad flag values).
[[noreturn]] void usage(const std::string& message) { throw Error(Errc::kFormatError, message); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) usage("cannot write '" + path.string() + "'");
  return path.string();
}

/// File name without directory and without the first extension, so that
/// "build/product3.qap.json" gives "product3".
std::string stem_of(const std::string& path) {
  std::string name = fs::path(path).filename().string();
  auto dot = name.find('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

const PrimeField& field_from_option(const std::string& text) {
  for (const auto& name : PrimeField::preset_names()) {
    if (name == text) return PrimeField::preset(name);
  }
  mpz_class p;
  bool hex = text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0;
  if (text.empty() || p.set_str(hex ? text.substr(2) : text, hex ? 16 : 10) != 0) {
    std::string names;
    for (const auto& n : PrimeField::preset_names()) names += " " + n;
    usage("--field must be a preset (" + names.substr(1) + ") or a prime in decimal or 0x-hex");
  }
  return PrimeField::get(p);
}

circuit::InputMap parse_pins(const PrimeField& f, const std::vector<std::string>& pins) {
  circuit::InputMap out;
  for (const auto& pin : pins) {
    auto eq = pin.find('=');
    if (eq == std::string::npos || eq == 0) usage("--pin expects name=value, got '" + pin + "'");
    out.insert_or_assign(pin.substr(0, eq), f.parse(pin.substr(eq + 1)));
  }
  return out;
}

struct Compiled {
  circuit::CircuitAst ast;
  circuit::ConstraintSystem full;
  circuit::Specialization spec;
};

Compiled compile_source(const std::string& path, const PrimeField& f, const circuit::InputMap& pins) {
  auto ast = circuit::parse_circuit(read_file(path), f, &gadgets::standard_templates());
  auto cs = circuit::flatten(ast);
  auto spec = circuit::specialize(cs, pins);
  return Compiled{std::move(ast), std::move(cs), std::move(spec)};
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kNotSatisfying:
    case Errc::kAssertionFailed:
    case Errc::kRangeViolation:
    case Errc::kDivisorZero:
      return kExitUnsatisfied;
    default:
      return kExitUsage;
  }
}

class Tool {
 public:
  Tool(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  int compile() {
    const PrimeField& f = field_from_option(opt_.field);
    auto c = compile_source(opt_.circuit, f, parse_pins(f, opt_.pins));
    Qap qap(c.spec.cs);
    std::string digest = pinocchio::circuit_digest(c.spec.cs);
    fs::path dir(opt_.out);
    std::string stem = stem_of(opt_.circuit);
    std::vector<std::string> files{
        write_file(dir / (stem + ".r1cs.json"), io::save_constraint_system(c.spec.cs)),
        write_file(dir / (stem + ".qap.json"), io::save_qap(qap))};
    return report({{"command", "compile"},
                   {"field", f.modulus_hex()},
                   {"m", c.spec.cs.num_constraints()},
                   {"n", c.spec.cs.num_wires()},
                   {"pinned", opt_.pins.size()},
                   {"digest", digest},
                   {"files", files}},
                  {"m", "n", "pinned", "digest"});
  }

  int setup() {
    Qap qap = io::load_qap(read_file(opt_.qap));
    const auto& be = pairing::backend(pairing::parse_backend_kind(opt_.backend), qap.field());
    Rng rng(opt_.seed);
    auto keys = pinocchio::setup(be, qap, rng);
    fs::path dir(opt_.out);
    std::string stem = stem_of(opt_.qap);
    std::vector<std::string> files{
        write_file(dir / (stem + ".ek.json"), io::save_evaluation_key(keys.ek)),
        write_file(dir / (stem + ".vk.json"), io::save_verification_key(keys.vk))};
    return report({{"command", "setup"},
                   {"backend", be.descriptor()},
                   {"seed", opt_.seed},
                   {"m", qap.num_constraints()},
                   {"n", qap.num_wires()},
                   {"digest", keys.vk.digest},
                   {"files", files}},
                  {"backend", "m", "n", "digest"});
  }

  int prove() {
    auto ek = io::load_evaluation_key(read_file(opt_.ek));
    const PrimeField& f = ek.backend().scalar_field();
    auto pins = parse_pins(f, opt_.pins);
    auto c = compile_source(opt_.circuit, f, pins);
    std::string digest = pinocchio::circuit_digest(c.spec.cs);
    if (digest != ek.digest) {
      throw Error(Errc::kDigestMismatch,
                  "circuit and pins give digest " + digest.substr(0, 16) +
                      "..., the evaluation key is for " + ek.digest.substr(0, 16) + "...");
    }
    auto full = circuit::eval_witness(c.ast, io::parse_inputs(f, read_file(opt_.inputs)));
    for (const auto& [name, value] : pins) {
      if (full[*c.full.wire_index(name)] != value) {
        throw Error(Errc::kNotSatisfying, "wire '" + name + "' evaluates to " +
                                              full[*c.full.wire_index(name)].to_hex() +
                                              ", pinned to " + value.to_hex());
      }
    }
    auto w = circuit::project(full, c.spec.kept);
    Qap qap(c.spec.cs);
    Rng rng(opt_.seed);
    auto proof = opt_.zk ? pinocchio::prove_zk(ek, qap, w, rng) : pinocchio::prove(ek, qap, w);

    Json outputs = Json::object();
    for (std::size_t i = 0; i < c.full.num_wires(); ++i) {
      const auto& info = c.full.wires()[i];
      if (info.visibility == circuit::Visibility::kOutput) {
        outputs[info.name] = full[i].to_mpz().get_str();
      }
    }
    std::string file = write_file(fs::path(opt_.out) / (stem_of(opt_.circuit) + ".proof.json"),
                                  io::save_proof(proof));
    return report({{"command", "prove"},
                   {"zk", opt_.zk},
                   {"elements", pinocchio::Proof::kElementCount},
                   {"outputs", outputs},
                   {"digest", proof.digest},
                   {"files", Json::array({file})}},
                  {"zk", "elements", "outputs", "digest"});
  }

  int verify() {
    auto vk = io::load_verification_key(read_file(opt_.vk));
    std::string text = read_file(opt_.proof);
    std::optional<pinocchio::Proof> proof;
    std::string reason;
    try {
      proof = io::load_proof(text);
    } catch (const Error& e) {
      // A proof element that is not a group element is an invalid proof,
      // not a malformed file.
      if (e.code() != Errc::kPointNotOnCurve) throw;
      reason = e.what();
    }
    const auto& be = vk.backend();
    be.reset_pairing_count();
    bool ok = proof && pinocchio::verify(vk, *proof);
    Json r{{"command", "verify"},
           {"valid", ok},
           {"pairings", be.pairing_count()},
           {"backend", be.descriptor()}};
    if (!reason.empty()) r["reason"] = reason;
    report(r, {"valid", "pairings", "reason"});
    return ok ? kExitOk : kExitInvalid;
  }

  int demo() {
    std::string path = opt_.scenario;
    if (path.empty()) {
      const char* env = std::getenv("ZKIT_SCENARIO_DIR");
      path = (fs::path(env ? env : ZKIT_SCENARIO_DIR) / (opt_.demo_kind + ".json")).string();
    }
    Json scenario = io::parse(read_file(path));
    if (!scenario.is_object() || scenario.value("kind", "") != opt_.demo_kind) {
      usage("'" + path + "' is not a " + opt_.demo_kind + " scenario");
    }
    protocols::ScenarioOptions so;
    so.field = &field_from_option(opt_.field);
    so.backend = pairing::parse_backend_kind(opt_.backend);
    so.seed = opt_.seed;
    so.replay = opt_.replay;
    auto rep = protocols::run_scenario(scenario, so);
    std::string log_file =
        write_file(fs::path(opt_.out) / (opt_.demo_kind + ".log"), rep.log);

    if (opt_.json) {
      Json j = rep.to_json();
      j["command"] = "demo";
      j["log_file"] = log_file;
      out_ << j.dump() << "\n";
    } else {
      std::istringstream lines(rep.log);
      for (std::string line; std::getline(lines, line);) {
        Json doc = io::parse(line);
        const Json& rec = doc.at("payload");
        out_ << "block " << rec.at("height").get<std::uint64_t>() << "  "
             << rec.at("op").at("op").get<std::string>() << "  "
             << (rec.at("status") == "ok" ? std::string("ok")
                                           : rec.at("error").get<std::string>())
             << "  state " << rec.at("state_digest").get<std::string>().substr(0, 16) << "\n";
      }
      for (const auto& s : rep.steps) {
        if (s.met() && s.expected == "ok") continue;
        out_ << "step " << s.index << " " << s.op << " " << s.who << ": expected " << s.expected
             << ", got " << s.actual << (s.met() ? "" : "  MISSED") << "\n";
      }
      out_ << "proofs verified: " << rep.proofs_verified << "\n"
           << "attacks rejected: " << rep.attacks_rejected << "\n"
           << "replay: "
           << (!opt_.replay ? "skipped" : rep.replay_matches ? "match" : rep.replay_error) << "\n"
           << "audit: "
           << (rep.audit.empty() ? "clean"
                                 : std::to_string(rep.audit.size()) + " private values in log")
           << "\n"
           << "final state digest: " << rep.final_digest << "\n"
           << "event log: " << log_file << "\n"
           << "result: " << (rep.passed() ? "passed" : "FAILED") << "\n";
    }
    return rep.passed() ? kExitOk : kExitInvalid;
  }

 private:
  /// Prints `j` as one JSON line, or the listed keys as "key: value" lines
  /// followed by the written files.
  int report(const Json& j, std::initializer_list<const char*> keys) {
    if (opt_.json) {
      out_ << j.dump() << "\n";
      return kExitOk;
    }
    for (const char* k : keys) {
      if (!j.contains(k)) continue;
      const Json& v = j.at(k);
      if (v.is_object()) {
        for (const auto& [name, value] : v.items()) {
          out_ << k << "." << name << ": " << value.get<std::string>() << "\n";
        }
      } else {
        out_ << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
    if (j.contains("files")) {
      for (const auto& f : j.at("files")) out_ << "wrote " << f.get<std::string>() << "\n";
    }
    return kExitOk;
  }

  const Options& opt_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"zkit: arithmetic circuits to Pinocchio proofs, plus protocol demos", "zkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--field", opt.field, "Field preset (p101, p10007, bn254-scalar) or prime")
      ->envname("ZKIT_FIELD");
  app.add_option("--backend", opt.backend, "Pairing backend: transparent or curve")
      ->envname("ZKIT_BACKEND")
      ->check(CLI::IsMember({"transparent", "curve"}));
  app.add_option("--seed", opt.seed, "Seed for setup, zero-knowledge shifts and demos")
      ->envname("ZKIT_SEED");
  app.add_option("--out", opt.out, "Output directory")->envname("ZKIT_OUT");
  app.add_flag("--json", opt.json, "Print one JSON report line")->envname("ZKIT_JSON");

  auto* compile = app.add_subcommand("compile", "Circuit source to constraint system and QAP");
  compile->add_option("circuit", opt.circuit, "Circuit source (.zkc)")->required();
  compile->add_option("--pin", opt.pins, "Fix a public wire: name=value (repeatable)");

  auto* setup = app.add_subcommand("setup", "QAP to evaluation and verification keys");
  setup->add_option("qap", opt.qap, "QAP or constraint-system file")->required();

  auto* prove = app.add_subcommand("prove", "Evaluate a circuit on inputs and prove");
  prove->add_option("ek", opt.ek, "Evaluation key")->required();
  prove->add_option("circuit", opt.circuit, "Circuit source (.zkc)")->required();
  prove->add_option("inputs", opt.inputs, "JSON object of input values")->required();
  prove->add_option("--pin", opt.pins, "Same pins as given to compile");
  prove->add_flag("--zk", opt.zk, "Randomize the proof (zero knowledge)")->envname("ZKIT_ZK");

  auto* verify = app.add_subcommand("verify", "Check a proof against a verification key");
  verify->add_option("vk", opt.vk, "Verification key")->required();
  verify->add_option("proof", opt.proof, "Proof")->required();

  auto* demo = app.add_subcommand("demo", "Run a scripted protocol scenario");
  demo->add_option("kind", opt.demo_kind, "auction or cards")
      ->required()
      ->check(CLI::IsMember({"auction", "cards"}));
  demo->add_option("scenario", opt.scenario, "Scenario file (default: the bundled one)");
  demo->add_flag("!--no-replay", opt.replay, "Skip the replay check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Tool tool(opt, out);
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "compile") return tool.compile();
    if (command == "setup") return tool.setup();
    if (command == "prove") return tool.prove();
    if (command == "verify") return tool.verify();
    return tool.demo();
  } catch (const Error& e) {
    err << "zkit " << command << ": " << e.what() << "\n";
    if (opt.json) {
      Json j{{"command", command}, {"error", errc_name(e.code())}, {"message", e.what()}};
      if (e.location()) j["location"] = {{"line", e.location()->line}, {"column", e.location()->column}};
      out << j.dump() << "\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "zkit " << command << ": " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace zkit::cli
