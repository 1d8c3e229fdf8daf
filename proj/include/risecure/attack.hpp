#pragma once

#include "risecure/hash_extension.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace risecure {

enum class AttackMode { raw_arbiter, hashed_bit };

std::string_view to_string(AttackMode mode) noexcept;

struct CrpRecord {
    Bits challenge;
    std::uint8_t response = 0;
    friend bool operator==(const CrpRecord&, const CrpRecord&) = default;
};

struct CrpDataset {
    AttackMode mode = AttackMode::raw_arbiter;
    std::size_t challenge_bits = 0;
    std::vector<CrpRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    /// Disjoint head/tail split at `count`.
    std::pair<CrpDataset, CrpDataset> split(std::size_t count) const;
    friend bool operator==(const CrpDataset&, const CrpDataset&) = default;
};

/// Noiseless (c, bit) pairs from an arbiter-kind PUF over uniform random
/// stage-width challenges. Sampling bypasses the raw-read expansion.
CrpDataset generate_raw_crps(const PufInstance& puf, std::size_t count, std::uint64_t seed);

/// Enrolls (puf, c0) once, then emits (C, bit 0 of R3) over uniform random
/// 128-bit outer challenges.
CrpDataset generate_hashed_crps(const PufInstance& puf, const CodeSpec& code, const Challenge& c0,
                                std::size_t count, std::uint64_t seed,
                                HashAlgorithm hash = HashAlgorithm::sha3_256);

/// Feature map seen by the attacker: parity transform in raw mode, challenge
/// bits as +-1 plus a bias term in hashed mode.
std::vector<double> attack_features(AttackMode mode, const Bits& challenge);

struct LinearModel {
    AttackMode mode = AttackMode::raw_arbiter;
    std::vector<double> weights;
    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct TrainOptions {
    std::size_t epochs = 500;
    double learning_rate = 2.0;
    std::uint64_t seed = 0;
};

/// Row-major design matrix and labels for a dataset.
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<double> y;
};

DesignMatrix design_matrix(const CrpDataset& data);
LinearModel initial_model(AttackMode mode, std::size_t features, std::uint64_t seed);
double logistic_loss(const LinearModel& model, const DesignMatrix& m);
std::vector<double> logistic_gradient(const LinearModel& model, const DesignMatrix& m);

/// Full-batch gradient descent on the mean logistic loss. `loss_history`, when
/// given, receives the loss before each epoch and after the last.
LinearModel train_logreg(const CrpDataset& train, const TrainOptions& options,
                         std::vector<double>* loss_history = nullptr);

/// Fraction of records whose sign prediction matches the response bit.
double evaluate(const LinearModel& model, const CrpDataset& data);

struct TrainReport {
    AttackMode mode = AttackMode::raw_arbiter;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::size_t epochs = 0;
    double learning_rate = 0.0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double final_loss = 0.0;
    std::uint64_t seed = 0;
    friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

/// Trains on `train`, evaluates on both splits.
TrainReport attack(const CrpDataset& train, const CrpDataset& test, const TrainOptions& options);

std::string to_csv(const CrpDataset& data);
CrpDataset crps_from_csv(std::string_view text, AttackMode mode, std::size_t challenge_bits);

}  // namespace risecure
