// JSON crosses the boundary as text; the Python side wraps it in dicts.
#include "risecure/attack.hpp"
#include "risecure/bench.hpp"
#include "risecure/error.hpp"
#include "risecure/fuzzy_extractor.hpp"
#include "risecure/hash.hpp"
#include "risecure/hash_extension.hpp"
#include "risecure/selftest.hpp"
#include "risecure/serialize.hpp"
#include "risecure/system.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace risecure;

namespace {

std::vector<std::uint8_t> as_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

py::bytes digest_bytes(const Digest& d) { return {reinterpret_cast<const char*>(d.data()), d.size()}; }

std::string new_system(const std::string& kind, const std::string& code_id, std::uint64_t seed, double flip_prob,
                       std::size_t capacity, const std::string& hash_name) {
    const CodeSpec code = CodeSpec::from_id(code_id);
    PufInstance puf = default_puf(parse_puf_kind(kind), seed, code);
    if (kind == "sram" && flip_prob >= 0) {
        const auto& p = std::get<SramParams>(puf.params());
        puf = new_puf(PufKind::sram, seed, SramParams{p.num_blocks, p.block_bits, flip_prob});
    }
    SystemConfig cfg{puf, code, capacity, parse_hash_algorithm(hash_name), seed};
    cfg.validate();
    return system_to_json(cfg).dump();
}

std::string enroll_json(const std::string& system, std::uint64_t challenge, std::uint64_t seed) {
    const SystemConfig cfg = system_from_json(Json::parse(system));
    return helper_to_json(enroll(cfg.puf, Challenge::from_u64(challenge), cfg.code, seed).helper).dump();
}

std::string sample_hex(const std::string& system, std::uint64_t challenge, const std::string& mode,
                       const std::optional<std::string>& helper, const std::optional<std::string>& outer_hex,
                       std::uint64_t seed) {
    const SystemConfig cfg = system_from_json(Json::parse(system));
    OutputRequest req;
    req.mode = parse_output_mode(mode);
    req.c0 = Challenge::from_u64(challenge);
    req.noise_seed = seed;
    req.hash = cfg.hash;
    if (helper) req.helper = helper_from_json(Json::parse(*helper));
    if (outer_hex) {
        if (outer_hex->size() != kOuterChallengeBits / 4) throw Error("outer challenge must be 32 hex digits");
        req.outer = OuterChallenge{Bits::from_hex(*outer_hex, kOuterChallengeBits)};
    }
    return to_hex(select_output(cfg.puf, cfg.code, req));
}

std::string attack_json(std::size_t train_n, std::size_t test_n, std::size_t epochs, double lr, std::size_t stages,
                        std::uint64_t seed) {
    TrainOptions topt;
    topt.epochs = epochs;
    topt.learning_rate = lr;
    topt.seed = seed;
    const PufInstance puf = PufInstance::create(seed, ArbiterParams{stages, 0.0, 127});
    const auto [raw_train, raw_test] = generate_raw_crps(puf, train_n + test_n, seed).split(train_n);
    const auto [h_train, h_test] =
        generate_hashed_crps(puf, CodeSpec::default_bch(), Challenge::from_u64(seed), train_n + test_n, seed)
            .split(train_n);
    const TrainReport raw = attack(raw_train, raw_test, topt);
    const TrainReport hashed = attack(h_train, h_test, topt);
    return Json{{"schema_version", kSchemaVersion},
                {"raw", to_json(raw)},
                {"hashed", to_json(hashed)},
                {"gap", raw.test_accuracy - hashed.test_accuracy}}
        .dump();
}

std::string bench_json(const std::string& system, const std::vector<std::size_t>& batches, std::size_t repeats) {
    BenchOptions opt;
    opt.batch_sizes = batches;
    opt.repeats = repeats;
    return to_json(run_batch_bench(system_from_json(Json::parse(system)), opt)).dump();
}

}  // namespace

PYBIND11_MODULE(_risecure, m) {
    py::register_exception<ReconstructFailure>(m, "ReconstructFailure", PyExc_RuntimeError);
    py::register_exception<Error>(m, "RisecureError", PyExc_ValueError);

    m.def("sha3_256", [](const py::bytes& b) { return digest_bytes(sha3_256(as_bytes(b))); });
    m.def("sha2_256", [](const py::bytes& b) { return digest_bytes(sha2_256(as_bytes(b))); });
    m.def("new_system", &new_system, py::arg("kind") = "sram", py::arg("code") = "bch", py::arg("seed") = 0,
          py::arg("flip_prob") = -1.0, py::arg("capacity") = 16, py::arg("hash") = "sha3-256");
    m.def("enroll", &enroll_json, py::arg("system"), py::arg("challenge"), py::arg("seed") = 0);
    m.def("sample", &sample_hex, py::arg("system"), py::arg("challenge"), py::arg("mode") = "hashed",
          py::arg("helper") = py::none(), py::arg("outer") = py::none(), py::arg("seed") = 0);
    m.def("attack", &attack_json, py::arg("train") = 10000, py::arg("test") = 2000,
          py::arg("epochs") = TrainOptions{}.epochs, py::arg("lr") = TrainOptions{}.learning_rate,
          py::arg("stages") = 64, py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("bench", &bench_json, py::arg("system"), py::arg("batches") = std::vector<std::size_t>{1, 2, 4, 8, 16},
          py::arg("repeats") = 5, py::call_guard<py::gil_scoped_release>());
    m.def("selftest", [](std::uint64_t seed) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& r : run_selftest({false, seed})) out.emplace_back(r.name, r.passed, r.detail);
        return out;
    }, py::arg("seed") = 0);
}
