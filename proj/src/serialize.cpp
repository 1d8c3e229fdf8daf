#include "risecure/serialize.hpp"

#include "risecure/error.hpp"

namespace risecure {

void check_schema(const Json& j, std::string_view what) {
    if (!j.is_object() || !j.contains("schema_version")) {
        throw Error(std::string(what) + ": missing schema_version");
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw Error(std::string(what) + ": unsupported schema_version " + j.at("schema_version").dump());
    }
}

namespace {

template <class T>
T field(const Json& j, const char* key, std::string_view what) {
    if (!j.contains(key)) throw Error(std::string(what) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string(what) + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace

Json puf_to_json(const PufInstance& puf) {
    Json params;
    if (const auto* s = std::get_if<SramParams>(&puf.params())) {
        params = {{"num_blocks", s->num_blocks}, {"block_bits", s->block_bits}, {"flip_prob", s->flip_prob}};
    } else if (const auto* a = std::get_if<ArbiterParams>(&puf.params())) {
        params = {{"stages", a->stages}, {"noise_sigma", a->noise_sigma}, {"response_bits", a->response_bits}};
    } else {
        const auto& x = std::get<XorArbiterParams>(puf.params());
        params = {{"chains", x.chains},
                  {"stages", x.stages},
                  {"noise_sigma", x.noise_sigma},
                  {"response_bits", x.response_bits}};
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", std::string(to_string(puf.kind()))},
            {"seed", puf.seed()},
            {"params", params}};
}

PufInstance puf_from_json(const Json& j) {
    check_schema(j, "puf");
    const auto kind = parse_puf_kind(field<std::string>(j, "kind", "puf"));
    const auto seed = field<std::uint64_t>(j, "seed", "puf");
    const Json p = field<Json>(j, "params", "puf");
    switch (kind) {
        case PufKind::sram:
            return new_puf(kind, seed,
                           SramParams{field<std::uint64_t>(p, "num_blocks", "sram params"),
                                      field<std::size_t>(p, "block_bits", "sram params"),
                                      field<double>(p, "flip_prob", "sram params")});
        case PufKind::arbiter:
            return new_puf(kind, seed,
                           ArbiterParams{field<std::size_t>(p, "stages", "arbiter params"),
                                         field<double>(p, "noise_sigma", "arbiter params"),
                                         field<std::size_t>(p, "response_bits", "arbiter params")});
        case PufKind::xor_arbiter:
            return new_puf(kind, seed,
                           XorArbiterParams{field<std::size_t>(p, "chains", "xor params"),
                                            field<std::size_t>(p, "stages", "xor params"),
                                            field<double>(p, "noise_sigma", "xor params"),
                                            field<std::size_t>(p, "response_bits", "xor params")});
    }
    throw Error("puf: unknown kind");
}

Json helper_to_json(const HelperData& helper) {
    return {{"schema_version", kSchemaVersion},
            {"code_id", helper.code_id},
            {"n", helper.aux.size()},
            {"aux", helper.aux.to_hex()}};
}

HelperData helper_from_json(const Json& j) {
    check_schema(j, "helper");
    HelperData h;
    h.code_id = field<std::string>(j, "code_id", "helper");
    const auto n = field<std::size_t>(j, "n", "helper");
    const auto hex = field<std::string>(j, "aux", "helper");
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) throw Error("helper: aux must be lowercase hex");
    }
    h.aux = Bits::from_hex(hex, n);
    const CodeSpec code = CodeSpec::from_id(h.code_id);
    if (code.n_bits() != n) throw Error("helper: n does not match " + h.code_id);
    return h;
}

Json system_to_json(const SystemConfig& cfg) {
    return {{"schema_version", kSchemaVersion},
            {"puf", puf_to_json(cfg.puf)},
            {"code", cfg.code.id()},
            {"buffer_capacity", cfg.buffer_capacity},
            {"hash", std::string(to_string(cfg.hash))},
            {"seed", cfg.seed}};
}

SystemConfig system_from_json(const Json& j) {
    check_schema(j, "system");
    SystemConfig cfg{puf_from_json(field<Json>(j, "puf", "system")),
                     CodeSpec::from_id(field<std::string>(j, "code", "system")),
                     field<std::size_t>(j, "buffer_capacity", "system"),
                     parse_hash_algorithm(field<std::string>(j, "hash", "system")),
                     field<std::uint64_t>(j, "seed", "system")};
    cfg.validate();
    return cfg;
}

Json device_to_json(const PufDevice& device) {
    Json pufs = Json::array();
    for (const auto& [idx, puf] : device.pufs()) pufs.push_back({{"idx", idx}, {"puf", puf_to_json(puf)}});
    return {{"schema_version", kSchemaVersion},
            {"code", device.code().id()},
            {"buffer_capacity", device.buffer().capacity()},
            {"hash", std::string(to_string(device.hash()))},
            {"seed", device.seed()},
            {"pufs", pufs}};
}

PufDevice device_from_json(const Json& j) {
    check_schema(j, "device");
    PufDevice dev(CodeSpec::from_id(field<std::string>(j, "code", "device")),
                  field<std::size_t>(j, "buffer_capacity", "device"),
                  field<std::uint64_t>(j, "seed", "device"),
                  parse_hash_algorithm(field<std::string>(j, "hash", "device")));
    for (const auto& entry : field<Json>(j, "pufs", "device")) {
        dev.attach(field<std::uint32_t>(entry, "idx", "device puf"), puf_from_json(field<Json>(entry, "puf", "device puf")));
    }
    return dev;
}

Json to_json(const BufferCounters& c) {
    return {{"hits", c.hits}, {"misses", c.misses}, {"decode_calls", c.decode_calls}, {"evictions", c.evictions}};
}

namespace {
Json leg_json(const BenchLeg& leg) {
    return {{"best_us", leg.best_us},
            {"median_us", leg.median_us},
            {"crps_per_ms", leg.crps_per_ms},
            {"failures", leg.failures},
            {"counters", to_json(leg.counters)}};
}
}  // namespace

Json to_json(const BenchReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"batch", row.batch},
                        {"unbuffered", leg_json(row.unbuffered)},
                        {"buffered", leg_json(row.buffered)},
                        {"speedup", row.speedup}});
    }
    return {{"schema_version", kSchemaVersion},
            {"code_id", r.code_id},
            {"puf_kind", r.puf_kind},
            {"capacity", r.capacity},
            {"distinct_keys", r.distinct_keys},
            {"rows", rows},
            {"single_sample",
             {{"corrected_crps_per_ms", r.throughput.corrected_crps_per_ms},
              {"hashed_crps_per_ms", r.throughput.hashed_crps_per_ms},
              {"change_pct", r.throughput.change_pct}}},
            {"hardware_reference",
             {{"batch16_unbuffered_us", r.reference.batch16_unbuffered_us},
              {"batch16_buffered_us", r.reference.batch16_buffered_us},
              {"batch16_speedup", r.reference.batch16_speedup},
              {"hashed_throughput_change_pct", r.reference.hashed_throughput_change_pct}}}};
}

Json to_json(const TrainReport& r) {
    return {{"schema_version", kSchemaVersion},
            {"mode", std::string(to_string(r.mode))},
            {"train_accuracy", r.train_accuracy},
            {"test_accuracy", r.test_accuracy},
            {"epochs", r.epochs},
            {"learning_rate", r.learning_rate},
            {"train_size", r.train_size},
            {"test_size", r.test_size},
            {"final_loss", r.final_loss},
            {"seed", r.seed}};
}

TrainReport train_report_from_json(const Json& j) {
    check_schema(j, "train report");
    TrainReport r;
    const auto mode = field<std::string>(j, "mode", "train report");
    if (mode == "raw_arbiter") r.mode = AttackMode::raw_arbiter;
    else if (mode == "hashed_bit") r.mode = AttackMode::hashed_bit;
    else throw Error("train report: unknown mode " + mode);
    r.train_accuracy = field<double>(j, "train_accuracy", "train report");
    r.test_accuracy = field<double>(j, "test_accuracy", "train report");
    r.epochs = field<std::size_t>(j, "epochs", "train report");
    r.learning_rate = field<double>(j, "learning_rate", "train report");
    r.train_size = field<std::size_t>(j, "train_size", "train report");
    r.test_size = field<std::size_t>(j, "test_size", "train report");
    r.final_loss = field<double>(j, "final_loss", "train report");
    r.seed = field<std::uint64_t>(j, "seed", "train report");
    return r;
}

Json to_json(const UnpredictabilityReport& r) {
    return {{"samples", r.samples},         {"bits", r.bits},
            {"monobit_z", r.monobit_z},     {"max_bias_z", r.max_bias_z},
            {"worst_bit", r.worst_bit},     {"serial_z", r.serial_z},
            {"threshold", r.threshold},     {"monobit_pass", r.monobit_pass()},
            {"bias_pass", r.bias_pass()},   {"serial_pass", r.serial_pass()},
            {"pass", r.pass()}};
}

Json machine_dump(const isa::Machine& m, std::optional<std::pair<std::uint32_t, std::uint32_t>> window) {
    Json regs = Json::array();
    for (unsigned i = 0; i < 32; ++i) regs.push_back(m.reg(i));
    Json aux = Json::object();
    for (const auto& [idx, rec] : m.device().aux_table()) {
        aux[std::to_string(idx)] = {{"c0", rec.c0.bits.to_hex()}, {"helper", helper_to_json(rec.helper)}};
    }
    Json j = {{"schema_version", kSchemaVersion},
              {"pc", m.pc()},
              {"status", m.halted() ? "halted" : (m.trap_cause() == isa::TrapCause::none ? "running" : "trap")},
              {"trap_cause", std::string(isa::to_string(m.trap_cause()))},
              {"instret", m.instret()},
              {"regs", regs},
              {"buffer", to_json(m.device().buffer().counters())},
              {"aux_table", aux}};
    if (window) {
        j["memory"] = {{"address", window->first},
                       {"hex", to_hex(m.read_bytes(window->first, window->second))}};
    }
    return j;
}

}  // namespace risecure
