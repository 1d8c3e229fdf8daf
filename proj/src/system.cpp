#include "risecure/system.hpp"

#include "risecure/error.hpp"

namespace risecure {

void SystemConfig::validate() const {
    if (puf.response_bits() != code.n_bits()) {
        throw Error("system: PUF response width " + std::to_string(puf.response_bits()) + " != " + code.id() +
                    " length " + std::to_string(code.n_bits()));
    }
}

double default_flip_prob(const CodeSpec& code) noexcept { return code.variant() == CodeVariant::bch ? 0.05 : 0.002; }

PufInstance default_puf(PufKind kind, std::uint64_t seed, const CodeSpec& code) {
    switch (kind) {
        case PufKind::sram:
            return PufInstance::create(seed, SramParams{256, code.n_bits(), default_flip_prob(code)});
        case PufKind::arbiter:
            return PufInstance::create(seed, ArbiterParams{64, 0.0, code.n_bits()});
        case PufKind::xor_arbiter:
            return PufInstance::create(seed, XorArbiterParams{4, 64, 0.0, code.n_bits()});
    }
    throw Error("unknown PUF kind");
}

}  // namespace risecure
