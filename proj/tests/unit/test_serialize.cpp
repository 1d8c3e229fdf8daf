#include "doctest.h"

#include "risecure/error.hpp"
#include "risecure/serialize.hpp"

using namespace risecure;

namespace {

// parse -> serialize -> parse reaches a fixpoint on the JSON text.
template <class From, class To>
void check_fixpoint(const Json& j, From from, To to) {
    const Json once = to(from(j));
    CHECK(once == j);
    CHECK(Json::parse(once.dump()) == once);
    CHECK(to(from(Json::parse(once.dump()))).dump() == once.dump());
}

}  // namespace

TEST_CASE("PUF and system JSON round trip") {
    for (const auto& puf : {PufInstance::create(1, SramParams{64, 127, 0.03}),
                            PufInstance::create(2, ArbiterParams{32, 0.25, 127}),
                            PufInstance::create(3, XorArbiterParams{3, 64, 0.1, 127})}) {
        const Json j = puf_to_json(puf);
        CHECK(j.at("schema_version") == kSchemaVersion);
        const auto back = puf_from_json(j);
        CHECK(back.kind() == puf.kind());
        CHECK(back.reference_response(Challenge::from_u64(5)) == puf.reference_response(Challenge::from_u64(5)));
        check_fixpoint(j, puf_from_json, puf_to_json);
    }
    SystemConfig cfg{default_puf(PufKind::sram, 9, CodeSpec::default_rs()), CodeSpec::default_rs(), 8,
                     HashAlgorithm::sha2_256, 9};
    const Json j = system_to_json(cfg);
    CHECK(j.at("code") == "rs-255-223-16");
    const auto back = system_from_json(j);
    CHECK(back.code == cfg.code);
    CHECK(back.hash == HashAlgorithm::sha2_256);
    CHECK(back.buffer_capacity == 8);
    check_fixpoint(j, system_from_json, system_to_json);
}

TEST_CASE("system validation rejects width mismatches") {
    Json j = system_to_json(SystemConfig{});
    j["code"] = "rs";
    CHECK_THROWS_AS(system_from_json(j), Error);
}

TEST_CASE("helper JSON round trip and strictness") {
    const auto code = CodeSpec::default_bch();
    const auto e = enroll(PufInstance::create(1, SramParams{}), Challenge::from_u64(4), code, 3);
    const Json j = helper_to_json(e.helper);
    CHECK(j.at("n") == 127);
    CHECK(j.at("aux").get<std::string>().size() == 32);
    CHECK(helper_from_json(j) == e.helper);
    check_fixpoint(j, helper_from_json, helper_to_json);

    Json upper = j;
    std::string hex = upper["aux"];
    for (auto& c : hex) c = static_cast<char>(std::toupper(c));
    upper["aux"] = hex;
    if (hex != j["aux"]) CHECK_THROWS_AS(helper_from_json(upper), Error);

    Json padded = j;
    std::string p = padded["aux"];
    p.back() = p.back() == '1' ? '0' : '1';  // touches the padding bit
    padded["aux"] = p;
    CHECK_THROWS_AS(helper_from_json(padded), Error);

    Json wrong_n = j;
    wrong_n["n"] = 126;
    CHECK_THROWS_AS(helper_from_json(wrong_n), Error);

    Json version = j;
    version["schema_version"] = 2;
    CHECK_THROWS_AS(helper_from_json(version), Error);
    CHECK_THROWS_AS(helper_from_json(Json::object()), Error);
    CHECK_THROWS_AS(helper_from_json(Json::array()), Error);
}

TEST_CASE("device JSON round trip") {
    PufDevice dev(CodeSpec::default_bch(), 4, 17);
    dev.attach(0, PufInstance::create(1, SramParams{}));
    dev.attach(7, PufInstance::create(2, ArbiterParams{}));
    const Json j = device_to_json(dev);
    const auto back = device_from_json(j);
    CHECK(back.pufs().size() == 2);
    CHECK(back.seed() == 17);
    CHECK(back.buffer().capacity() == 4);
    check_fixpoint(j, device_from_json, device_to_json);
}

TEST_CASE("train report round trip") {
    TrainReport r{AttackMode::hashed_bit, 0.61, 0.49, 500, 2.0, 10000, 2000, 0.68, 5};
    const Json j = to_json(r);
    CHECK(train_report_from_json(j) == r);
    check_fixpoint(j, train_report_from_json, [](const TrainReport& t) { return to_json(t); });
    Json bad = j;
    bad["mode"] = "nonsense";
    CHECK_THROWS_AS(train_report_from_json(bad), Error);
}

TEST_CASE("machine dump") {
    isa::Machine m(256);
    m.load_words(0, std::vector<std::uint32_t>{isa::addi(1, 0, 7), isa::ebreak()});
    m.write_u32(0x40, 0xAABBCCDD);
    m.run();
    const Json j = machine_dump(m, std::pair{0x40U, 4U});
    CHECK(j.at("status") == "halted");
    CHECK(j.at("regs").at(1) == 7);
    CHECK(j.at("memory").at("hex") == "ddccbbaa");
    CHECK(j.at("instret") == 2);  // ebreak retires
}
