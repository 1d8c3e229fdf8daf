#include "doctest.h"

#include "risecure/attack.hpp"
#include "risecure/error.hpp"
#include "risecure/fuzzy_extractor.hpp"

#include <cmath>

using namespace risecure;

namespace {

const PufInstance& arbiter() {
    static const PufInstance puf = PufInstance::create(5, ArbiterParams{});
    return puf;
}

}  // namespace

TEST_CASE("raw CRPs are noiseless reference bits over stage-width challenges") {
    const auto data = generate_raw_crps(arbiter(), 300, 1);
    CHECK(data.mode == AttackMode::raw_arbiter);
    CHECK(data.challenge_bits == 64);
    REQUIRE(data.size() == 300);
    for (const auto& r : data.records) CHECK(r.response == arbiter().reference_bit(Challenge{r.challenge}));
    CHECK(generate_raw_crps(arbiter(), 300, 1) == data);
    CHECK(generate_raw_crps(arbiter(), 300, 2) != data);
    CHECK_THROWS_AS(generate_raw_crps(arbiter(), 99, 1), Error);
    CHECK_THROWS_AS(generate_raw_crps(PufInstance::create(1, SramParams{}), 200, 1), Error);
}

TEST_CASE("hashed CRPs are bit 0 of R3 for one enrolled state") {
    const auto code = CodeSpec::default_bch();
    const auto c0 = Challenge::from_u64(3);
    const auto data = generate_hashed_crps(arbiter(), code, c0, 200, 4);
    CHECK(data.mode == AttackMode::hashed_bit);
    CHECK(data.challenge_bits == 128);
    const auto e = enroll(arbiter(), c0, code, derive_key("crp-hashed-enroll", {4}));
    for (const auto& r : data.records) {
        const auto r3 = compose_response(e.response, OuterChallenge{r.challenge}, 127);
        CHECK(r.response == (r3.digest[0] >> 7));
    }
}

TEST_CASE("feature maps") {
    const Bits c = Bits::from_u64(0b1010, 4);
    CHECK(attack_features(AttackMode::raw_arbiter, c) == std::vector<double>{1, -1, -1, 1, 1});
    CHECK(attack_features(AttackMode::hashed_bit, c) == std::vector<double>{-1, 1, -1, 1, 1});
}

TEST_CASE("gradient matches central finite differences of the loss") {
    const auto data = generate_raw_crps(arbiter(), 300, 9);
    const auto m = design_matrix(data);
    LinearModel model = initial_model(AttackMode::raw_arbiter, m.cols, 3);
    Stream rng("test-fd", {});
    for (auto& w : model.weights) w = rng.normal();
    const auto g = logistic_gradient(model, m);
    const double h = 1e-5;
    for (std::size_t i = 0; i < m.cols; ++i) {
        LinearModel up = model, down = model;
        up.weights[i] += h;
        down.weights[i] -= h;
        const double fd = (logistic_loss(up, m) - logistic_loss(down, m)) / (2 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("loss is finite for large margins") {
    const auto data = generate_raw_crps(arbiter(), 200, 9);
    const auto m = design_matrix(data);
    LinearModel big{AttackMode::raw_arbiter, std::vector<double>(m.cols, 1e4)};
    CHECK(std::isfinite(logistic_loss(big, m)));
    for (double v : logistic_gradient(big, m)) CHECK(std::isfinite(v));
}

TEST_CASE("training decreases the loss and models the raw arbiter") {
    const auto data = generate_raw_crps(arbiter(), 3000, 11);
    const auto [train, test] = data.split(2500);
    CHECK(train.size() == 2500);
    CHECK(test.size() == 500);
    std::vector<double> history;
    const auto model = train_logreg(train, TrainOptions{200, 2.0, 1}, &history);
    REQUIRE(history.size() == 201);
    CHECK(history.back() < history.front());
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-12);
    CHECK(evaluate(model, test) > 0.9);
    CHECK_THROWS_AS(evaluate(model, generate_hashed_crps(arbiter(), CodeSpec::default_bch(), Challenge::from_u64(0),
                                                         200, 1)),
                    Error);
}

TEST_CASE("training preconditions") {
    auto data = generate_raw_crps(arbiter(), 300, 1);
    CHECK_THROWS_AS(train_logreg(data.split(199).first, {}), Error);
    for (auto& r : data.records) r.response = 1;
    CHECK_THROWS_AS(train_logreg(data, {}), Error);
    CHECK_THROWS_AS(train_logreg(generate_raw_crps(arbiter(), 300, 1), TrainOptions{10, 0.0, 0}), Error);
}

TEST_CASE("CRP CSV round trip and malformed input") {
    const auto raw = generate_raw_crps(arbiter(), 150, 2);
    const auto csv = to_csv(raw);
    CHECK(csv.rfind("challenge_hex,response_bit\n", 0) == 0);
    CHECK(crps_from_csv(csv, AttackMode::raw_arbiter, 64) == raw);
    CHECK(to_csv(crps_from_csv(csv, AttackMode::raw_arbiter, 64)) == csv);
    CHECK_THROWS_AS(crps_from_csv("x,y\n", AttackMode::raw_arbiter, 64), Error);
    CHECK_THROWS_AS(crps_from_csv("challenge_hex,response_bit\n00,1\n", AttackMode::raw_arbiter, 64), Error);
    CHECK_THROWS_AS(crps_from_csv("challenge_hex,response_bit\n0000000000000000,2\n", AttackMode::raw_arbiter, 64),
                    Error);
    CHECK_THROWS_AS(crps_from_csv("", AttackMode::raw_arbiter, 64), Error);
}
