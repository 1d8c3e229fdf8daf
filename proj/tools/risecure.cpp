// risecure: command-line front end for the PUF security-extension simulator.

#include "risecure/attack.hpp"
#include "risecure/bench.hpp"
#include "risecure/error.hpp"
#include "risecure/ise.hpp"
#include "risecure/selftest.hpp"
#include "risecure/serialize.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace risecure;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used, 0);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(std::string("invalid ") + what + ": " + s);
    }
}

struct SeedOption {
    std::string value;

    std::uint64_t get() const {
        if (!value.empty()) return parse_u64(value, "seed");
        if (const char* env = std::getenv("RISECURE_SEED"); env && *env) return parse_u64(env, "RISECURE_SEED");
        return 0;
    }
};

OuterChallenge parse_outer(const std::string& hex) {
    if (hex.size() != 2 * kOuterChallengeBits / 8 && !(hex.starts_with("0x") && hex.size() == 2 + kOuterChallengeBits / 4)) {
        throw Error("outer challenge must be exactly " + std::to_string(kOuterChallengeBits / 4) + " hex digits");
    }
    return {Bits::from_hex(hex, kOuterChallengeBits)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"risecure: PUF security-extension simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    // puf new / puf calibrate
    auto* puf_cmd = app.add_subcommand("puf", "Create or calibrate PUF systems");
    puf_cmd->require_subcommand(1);
    auto* puf_new = puf_cmd->add_subcommand("new", "Write a system JSON");
    std::string kind = "sram", code_id = "bch", hash_name = "sha3-256", out_path;
    SeedOption seed;
    std::size_t capacity = 16, stages = 64, chains = 4;
    std::uint64_t blocks = 256;
    double flip_prob = -1.0, sigma = 0.0;
    puf_new->add_option("--kind", kind, "sram | arbiter | xor")->check(CLI::IsMember({"sram", "arbiter", "xor"}));
    puf_new->add_option("--code", code_id, "bch | rs | <family>-<n>-<k>-<t>");
    puf_new->add_option("--seed", seed.value, "PUF and system seed (default $RISECURE_SEED or 0)");
    puf_new->add_option("--flip-prob", flip_prob, "SRAM per-bit flip probability");
    puf_new->add_option("--blocks", blocks, "SRAM block count");
    puf_new->add_option("--sigma", sigma, "arbiter delay-noise sigma");
    puf_new->add_option("--stages", stages, "arbiter stage count");
    puf_new->add_option("--chains", chains, "XOR chain count");
    puf_new->add_option("--capacity", capacity, "lookaside buffer capacity");
    puf_new->add_option("--hash", hash_name, "sha3-256 | sha2-256");
    puf_new->add_option("-o,--output", out_path, "output path")->required();

    auto* puf_cal = puf_cmd->add_subcommand("calibrate", "Find the noise sigma for a target reliability");
    double target = 0.9976;
    std::size_t trials = 1000;
    std::string cal_kind = "arbiter";
    puf_cal->add_option("--kind", cal_kind, "arbiter | xor")->check(CLI::IsMember({"arbiter", "xor"}));
    puf_cal->add_option("--target", target, "target reliability fraction");
    puf_cal->add_option("--trials", trials, "raw reads per Monte-Carlo evaluation");
    puf_cal->add_option("--seed", seed.value, "seed");
    puf_cal->add_option("--stages", stages, "stage count");
    puf_cal->add_option("--chains", chains, "XOR chain count");
    puf_cal->add_option("-o,--output", out_path, "report path (default stdout)");

    // enroll
    auto* enroll_cmd = app.add_subcommand("enroll", "Enroll a challenge and write helper data");
    std::string system_path, challenge_str = "0", helper_path;
    enroll_cmd->add_option("--system", system_path, "system JSON")->required()->check(CLI::ExistingFile);
    enroll_cmd->add_option("--challenge", challenge_str, "inner challenge C0 (integer, 0x.. for hex)");
    enroll_cmd->add_option("--seed", seed.value, "enrollment randomness seed");
    enroll_cmd->add_option("-o,--output", out_path, "helper JSON path")->required();

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Sample one response and print it as hex");
    std::string mode_name = "hashed", outer_hex;
    sample_cmd->add_option("--system", system_path, "system JSON")->required()->check(CLI::ExistingFile);
    sample_cmd->add_option("--challenge", challenge_str, "inner challenge C0");
    sample_cmd->add_option("--mode", mode_name, "raw | corrected | hashed")
        ->check(CLI::IsMember({"raw", "corrected", "hashed", "00", "01", "10", "11"}));
    sample_cmd->add_option("--helper", helper_path, "helper JSON (corrected/hashed)")->check(CLI::ExistingFile);
    sample_cmd->add_option("--outer", outer_hex, "outer challenge C, 32 hex digits (hashed)");
    sample_cmd->add_option("--seed", seed.value, "read-noise seed");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Batch benchmark with and without the lookaside buffer");
    std::vector<std::size_t> batches{1, 2, 4, 8, 16};
    std::size_t repeats = 5, throughput = 200;
    bool distinct = false, lru = false;
    bench_cmd->add_option("--system", system_path, "system JSON (default: SRAM with --code)")->check(CLI::ExistingFile);
    bench_cmd->add_option("--code", code_id, "bch | rs when no system file is given");
    bench_cmd->add_option("--batch", batches, "batch sizes")->delimiter(',');
    bench_cmd->add_option("--repeats", repeats, "timed repeats per leg");
    bench_cmd->add_option("--throughput-samples", throughput, "single-sample throughput run length");
    bench_cmd->add_flag("--distinct-keys", distinct, "sample B distinct keys per batch");
    bench_cmd->add_flag("--lru", lru, "use LRU instead of FIFO (comparison only)");
    bench_cmd->add_option("--seed", seed.value, "seed");
    bench_cmd->add_option("-o,--output", out_path, "report path (default stdout)");

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "Logistic-regression modeling attack, raw vs hashed");
    std::size_t train_n = 10000, test_n = 2000;
    TrainOptions topt;
    std::string dump_prefix;
    attack_cmd->add_option("--train", train_n, "training CRPs");
    attack_cmd->add_option("--test", test_n, "held-out CRPs");
    attack_cmd->add_option("--epochs", topt.epochs, "gradient-descent epochs");
    attack_cmd->add_option("--lr", topt.learning_rate, "learning rate");
    attack_cmd->add_option("--stages", stages, "arbiter stage count");
    attack_cmd->add_option("--seed", seed.value, "seed");
    attack_cmd->add_option("--dump-crps", dump_prefix, "write <prefix>_raw.csv and <prefix>_hashed.csv");
    attack_cmd->add_option("-o,--output", out_path, "report path (default stdout)");

    // selftest
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the fast invariant suite");
    bool inject = false;
    selftest_cmd->add_flag("--inject-fault", inject, "corrupt the ECC decoder to prove the suite catches it");
    selftest_cmd->add_option("--seed", seed.value, "seed");

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute an RV32I program with the PUF instructions");
    std::string program_path, binary_path, device_path, dump_mem;
    std::uint32_t entry = 0;
    std::size_t memory_bytes = 1U << 20;
    std::uint64_t max_steps = 10'000'000;
    auto* prog_opt = run_cmd->add_option("--program", program_path, "hex program (address: word per line)")
                         ->check(CLI::ExistingFile);
    auto* bin_opt = run_cmd->add_option("--binary", binary_path, "flat binary loaded at --entry")->check(CLI::ExistingFile);
    prog_opt->excludes(bin_opt);
    run_cmd->add_option("--device", device_path, "device JSON")->check(CLI::ExistingFile);
    run_cmd->add_option("--entry", entry, "entry pc (default: lowest loaded address)");
    run_cmd->add_option("--memory", memory_bytes, "memory size in bytes");
    run_cmd->add_option("--max-steps", max_steps, "step limit");
    run_cmd->add_option("--dump-memory", dump_mem, "addr:len window to include in the dump");
    run_cmd->add_option("-o,--output", out_path, "dump path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (puf_new->parsed()) {
            const CodeSpec code = CodeSpec::from_id(code_id);
            const std::uint64_t s = seed.get();
            PufInstance puf = default_puf(parse_puf_kind(kind), s, code);
            if (kind == "sram") {
                puf = new_puf(PufKind::sram, s,
                              SramParams{blocks, code.n_bits(), flip_prob >= 0 ? flip_prob : default_flip_prob(code)});
            } else if (kind == "arbiter") {
                puf = new_puf(PufKind::arbiter, s, ArbiterParams{stages, sigma, code.n_bits()});
            } else {
                puf = new_puf(PufKind::xor_arbiter, s, XorArbiterParams{chains, stages, sigma, code.n_bits()});
            }
            SystemConfig cfg{puf, code, capacity, parse_hash_algorithm(hash_name), s};
            cfg.validate();
            write_json(out_path, system_to_json(cfg));
        } else if (puf_cal->parsed()) {
            const std::uint64_t s = seed.get();
            PufInstance puf = cal_kind == "arbiter"
                                  ? PufInstance::create(s, ArbiterParams{stages, 0.0, 127})
                                  : PufInstance::create(s, XorArbiterParams{chains, stages, 0.0, 127});
            const double found = calibrate_sigma(puf, target, trials, s);
            const double check = measure_reliability(puf.with_noise_sigma(found), trials, derive_key("check", {s}));
            write_json(out_path, {{"kind", cal_kind}, {"target", target}, {"sigma", found},
                                  {"trials", trials}, {"holdout_reliability", check}});
        } else if (enroll_cmd->parsed()) {
            const SystemConfig cfg = system_from_json(read_json(system_path));
            const Challenge c0 = Challenge::from_u64(parse_u64(challenge_str, "challenge"));
            const Enrollment e = enroll(cfg.puf, c0, cfg.code, seed.get());
            write_json(out_path, helper_to_json(e.helper));
        } else if (sample_cmd->parsed()) {
            const SystemConfig cfg = system_from_json(read_json(system_path));
            OutputRequest req;
            req.mode = parse_output_mode(mode_name);
            req.c0 = Challenge::from_u64(parse_u64(challenge_str, "challenge"));
            req.noise_seed = seed.get();
            req.hash = cfg.hash;
            if (!helper_path.empty()) req.helper = helper_from_json(read_json(helper_path));
            if (!outer_hex.empty()) req.outer = parse_outer(outer_hex);
            std::cout << to_hex(select_output(cfg.puf, cfg.code, req)) << "\n";
        } else if (bench_cmd->parsed()) {
            SystemConfig cfg;
            if (!system_path.empty()) {
                cfg = system_from_json(read_json(system_path));
            } else {
                cfg.code = CodeSpec::from_id(code_id);
                cfg.seed = seed.get();
                cfg.puf = default_puf(PufKind::sram, cfg.seed, cfg.code);
            }
            BenchOptions opt;
            opt.batch_sizes = batches;
            opt.repeats = repeats;
            opt.distinct_keys = distinct;
            opt.policy = lru ? ReplacementPolicy::lru : ReplacementPolicy::fifo;
            opt.throughput_samples = throughput;
            write_json(out_path, to_json(run_batch_bench(cfg, opt)));
        } else if (attack_cmd->parsed()) {
            const std::uint64_t s = seed.get();
            topt.seed = s;
            const PufInstance puf = PufInstance::create(s, ArbiterParams{stages, 0.0, 127});
            const auto raw = generate_raw_crps(puf, train_n + test_n, s);
            const auto hashed =
                generate_hashed_crps(puf, CodeSpec::default_bch(), Challenge::from_u64(s), train_n + test_n, s);
            if (!dump_prefix.empty()) {
                write_text(dump_prefix + "_raw.csv", to_csv(raw));
                write_text(dump_prefix + "_hashed.csv", to_csv(hashed));
            }
            const auto [raw_train, raw_test] = raw.split(train_n);
            const auto [h_train, h_test] = hashed.split(train_n);
            const TrainReport raw_rep = attack(raw_train, raw_test, topt);
            const TrainReport hashed_rep = attack(h_train, h_test, topt);
            write_json(out_path, {{"schema_version", kSchemaVersion},
                                  {"raw", to_json(raw_rep)},
                                  {"hashed", to_json(hashed_rep)},
                                  {"gap", raw_rep.test_accuracy - hashed_rep.test_accuracy}});
        } else if (selftest_cmd->parsed()) {
            const auto results = run_selftest({inject, seed.get()});
            int failed = 0;
            for (const auto& r : results) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
                if (!r.passed) std::cout << ": " << r.detail;
                std::cout << "\n";
                failed += !r.passed;
            }
            if (failed) {
                std::cerr << failed << " selftest check(s) failed\n";
                return kExitDomain;
            }
        } else if (run_cmd->parsed()) {
            if (program_path.empty() && binary_path.empty()) throw CLI::RequiredError("--program or --binary");
            PufDevice device = device_path.empty() ? PufDevice() : device_from_json(read_json(device_path));
            isa::Machine m(memory_bytes, std::move(device));
            std::uint32_t pc = entry;
            if (!program_path.empty()) {
                const std::uint32_t lowest = isa::load_hex_program(m, read_file(program_path));
                if (run_cmd->count("--entry") == 0) pc = lowest;
            } else {
                const std::string image = read_file(binary_path);
                isa::load_binary(m, std::span(reinterpret_cast<const std::uint8_t*>(image.data()), image.size()), entry);
            }
            m.set_pc(pc);
            m.run(max_steps);
            std::optional<std::pair<std::uint32_t, std::uint32_t>> window;
            if (!dump_mem.empty()) {
                const auto colon = dump_mem.find(':');
                if (colon == std::string::npos) throw Error("--dump-memory expects addr:len");
                window = {static_cast<std::uint32_t>(parse_u64(dump_mem.substr(0, colon), "address")),
                          static_cast<std::uint32_t>(parse_u64(dump_mem.substr(colon + 1), "length"))};
            }
            write_json(out_path, machine_dump(m, window));
            if (!m.halted()) return kExitDomain;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
