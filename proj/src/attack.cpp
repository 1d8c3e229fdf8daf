#include "risecure/attack.hpp"

#include "risecure/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace risecure {

std::string_view to_string(AttackMode mode) noexcept {
    return mode == AttackMode::raw_arbiter ? "raw_arbiter" : "hashed_bit";
}

std::pair<CrpDataset, CrpDataset> CrpDataset::split(std::size_t count) const {
    if (count > records.size()) throw Error("CrpDataset::split: split point past the end");
    CrpDataset head{mode, challenge_bits, {records.begin(), records.begin() + static_cast<std::ptrdiff_t>(count)}};
    CrpDataset tail{mode, challenge_bits, {records.begin() + static_cast<std::ptrdiff_t>(count), records.end()}};
    return {std::move(head), std::move(tail)};
}

namespace {
Bits random_bits(Stream& rng, std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = rng.bit();
    return b;
}
}  // namespace

CrpDataset generate_raw_crps(const PufInstance& puf, std::size_t count, std::uint64_t seed) {
    if (count < 100) throw Error("generate_crps: need at least 100 records");
    const std::size_t s = puf.stages();
    Stream rng("crp-raw", {seed});
    CrpDataset out{AttackMode::raw_arbiter, s, {}};
    out.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Challenge c{random_bits(rng, s)};
        const bool r = puf.reference_bit(c);
        out.records.push_back({std::move(c.bits), static_cast<std::uint8_t>(r)});
    }
    return out;
}

CrpDataset generate_hashed_crps(const PufInstance& puf, const CodeSpec& code, const Challenge& c0,
                                std::size_t count, std::uint64_t seed, HashAlgorithm hash) {
    if (count < 100) throw Error("generate_crps: need at least 100 records");
    const Enrollment e = enroll(puf, c0, code, derive_key("crp-hashed-enroll", {seed}));
    Stream rng("crp-hashed", {seed});
    CrpDataset out{AttackMode::hashed_bit, kOuterChallengeBits, {}};
    out.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        OuterChallenge c{random_bits(rng, kOuterChallengeBits)};
        const auto r3 = compose_response(e.response, c, code.n_bits(), hash);
        out.records.push_back({std::move(c.bits), static_cast<std::uint8_t>(r3.digest[0] >> 7)});
    }
    return out;
}

std::vector<double> attack_features(AttackMode mode, const Bits& challenge) {
    if (mode == AttackMode::raw_arbiter) return parity_features(Challenge{challenge}, challenge.size());
    std::vector<double> f(challenge.size() + 1, 1.0);
    for (std::size_t i = 0; i < challenge.size(); ++i) f[i] = challenge[i] ? -1.0 : 1.0;
    return f;
}

DesignMatrix design_matrix(const CrpDataset& data) {
    DesignMatrix m;
    m.rows = data.size();
    m.cols = data.challenge_bits + 1;
    m.x.reserve(m.rows * m.cols);
    m.y.reserve(m.rows);
    for (const auto& rec : data.records) {
        if (rec.challenge.size() != data.challenge_bits) throw Error("dataset: inconsistent challenge width");
        const auto f = attack_features(data.mode, rec.challenge);
        m.x.insert(m.x.end(), f.begin(), f.end());
        m.y.push_back(rec.response);
    }
    return m;
}

LinearModel initial_model(AttackMode mode, std::size_t features, std::uint64_t seed) {
    LinearModel model{mode, std::vector<double>(features)};
    Stream rng("logreg-init", {seed});
    for (auto& w : model.weights) w = 0.01 * rng.normal();
    return model;
}

namespace {

double dot(std::span<const double> a, const double* b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_shape(const LinearModel& model, const DesignMatrix& m) {
    if (model.weights.size() != m.cols) throw Error("model/dataset feature width mismatch");
    if (m.rows == 0) throw Error("empty dataset");
}

}  // namespace

double logistic_loss(const LinearModel& model, const DesignMatrix& m) {
    check_shape(model, m);
    double total = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double z = dot(model.weights, &m.x[r * m.cols]);
        // -[y log s(z) + (1 - y) log(1 - s(z))]
        total += softplus(z) - m.y[r] * z;
    }
    return total / static_cast<double>(m.rows);
}

std::vector<double> logistic_gradient(const LinearModel& model, const DesignMatrix& m) {
    check_shape(model, m);
    std::vector<double> g(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = &m.x[r * m.cols];
        const double err = sigmoid(dot(model.weights, row)) - m.y[r];
        for (std::size_t c = 0; c < m.cols; ++c) g[c] += err * row[c];
    }
    for (auto& v : g) v /= static_cast<double>(m.rows);
    return g;
}

LinearModel train_logreg(const CrpDataset& train, const TrainOptions& options, std::vector<double>* loss_history) {
    if (train.size() < 200) throw Error("train_logreg: need at least 200 records");
    std::size_t ones = 0;
    for (const auto& r : train.records) ones += r.response;
    if (ones == 0 || ones == train.size()) throw Error("train_logreg: degenerate dataset (all labels equal)");
    if (!(options.learning_rate > 0.0)) throw Error("train_logreg: learning rate must be positive");

    const DesignMatrix m = design_matrix(train);
    LinearModel model = initial_model(train.mode, m.cols, options.seed);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        if (loss_history) loss_history->push_back(logistic_loss(model, m));
        const auto g = logistic_gradient(model, m);
        for (std::size_t c = 0; c < m.cols; ++c) model.weights[c] -= options.learning_rate * g[c];
    }
    if (loss_history) loss_history->push_back(logistic_loss(model, m));
    return model;
}

double evaluate(const LinearModel& model, const CrpDataset& data) {
    if (data.mode != model.mode) throw Error("evaluate: model and dataset modes differ");
    if (data.challenge_bits + 1 != model.weights.size()) throw Error("evaluate: challenge width mismatch");
    if (data.size() == 0) throw Error("evaluate: empty dataset");
    std::size_t correct = 0;
    for (const auto& rec : data.records) {
        const auto f = attack_features(data.mode, rec.challenge);
        const bool predicted = dot(f, model.weights.data()) > 0.0;
        correct += (predicted == (rec.response != 0));
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainReport attack(const CrpDataset& train, const CrpDataset& test, const TrainOptions& options) {
    const LinearModel model = train_logreg(train, options);
    TrainReport rep;
    rep.mode = train.mode;
    rep.train_accuracy = evaluate(model, train);
    rep.test_accuracy = evaluate(model, test);
    rep.epochs = options.epochs;
    rep.learning_rate = options.learning_rate;
    rep.train_size = train.size();
    rep.test_size = test.size();
    rep.final_loss = logistic_loss(model, design_matrix(train));
    rep.seed = options.seed;
    return rep;
}

std::string to_csv(const CrpDataset& data) {
    std::ostringstream os;
    os << "challenge_hex,response_bit\n";
    for (const auto& rec : data.records) os << rec.challenge.to_hex() << ',' << int(rec.response) << '\n';
    return os.str();
}

CrpDataset crps_from_csv(std::string_view text, AttackMode mode, std::size_t challenge_bits) {
    CrpDataset out{mode, challenge_bits, {}};
    bool header = true;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != "challenge_hex,response_bit") throw Error("CRP CSV: unexpected header");
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) throw Error("CRP CSV line " + std::to_string(line_no) + ": missing ','");
        const auto bit = line.substr(comma + 1);
        if (bit != "0" && bit != "1") throw Error("CRP CSV line " + std::to_string(line_no) + ": bad response bit");
        out.records.push_back({Bits::from_hex(line.substr(0, comma), challenge_bits),
                               static_cast<std::uint8_t>(bit == "1")});
    }
    if (header) throw Error("CRP CSV: missing header");
    return out;
}

}  // namespace risecure
