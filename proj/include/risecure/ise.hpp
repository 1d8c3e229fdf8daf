#pragma once

#include "risecure/device.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace risecure::isa {

inline constexpr std::uint32_t kCustomOpcode = 0b0101011;
inline constexpr std::uint32_t kFunct3InnerInit = 0b001;
inline constexpr std::uint32_t kFunct3OuterChal = 0b010;

/// Parameter block sizes of the custom-instruction calling convention.
inline constexpr std::uint32_t kInitBlockBytes = 12;  // idx (u32 LE), C0 (u64 LE)
inline constexpr std::uint32_t kChalBlockBytes = 20;  // idx (u32 LE), C (16 bytes, MSB-first bit order)
inline constexpr std::uint32_t kDigestBytes = 32;

/// R-type field split: funct7[31:25] rs2[24:20] rs1[19:15] funct3[14:12] rd[11:7] opcode[6:0].
struct Fields {
    std::uint32_t funct7 = 0;
    std::uint32_t rs2 = 0;
    std::uint32_t rs1 = 0;
    std::uint32_t funct3 = 0;
    std::uint32_t rd = 0;
    std::uint32_t opcode = 0;
    friend bool operator==(const Fields&, const Fields&) = default;
};

Fields fields_of(std::uint32_t word) noexcept;
std::uint32_t encode_fields(const Fields& f) noexcept;

enum class Op {
    lui, auipc, jal, jalr,
    beq, bne, blt, bge, bltu, bgeu,
    lb, lh, lw, lbu, lhu, sb, sh, sw,
    addi, slti, sltiu, xori, ori, andi, slli, srli, srai,
    add, sub, sll, slt, sltu, xor_, srl, sra, or_, and_,
    fence, ecall, ebreak,
};

struct BaseInstr {
    Op op;
    std::uint8_t rd = 0;
    std::uint8_t rs1 = 0;
    std::uint8_t rs2 = 0;
    std::int32_t imm = 0;
};

struct InnerPufInit {
    std::uint8_t rs1 = 0;
    std::uint8_t rd = 0;
};

struct OuterPufChal {
    std::uint8_t rs1 = 0;
    std::uint8_t rs2 = 0;
    std::uint8_t rd = 0;
};

struct DecodedInstr {
    std::variant<BaseInstr, InnerPufInit, OuterPufChal> instr;
    Fields raw;
};

/// nullopt means IllegalInstruction.
std::optional<DecodedInstr> decode(std::uint32_t word) noexcept;

// Encoders for the instructions the test programs need.
std::uint32_t inner_puf_init(unsigned rd, unsigned rs1) noexcept;
std::uint32_t outer_puf_chal(unsigned rd, unsigned rs1, unsigned rs2) noexcept;
std::uint32_t lui(unsigned rd, std::uint32_t imm20) noexcept;
std::uint32_t addi(unsigned rd, unsigned rs1, std::int32_t imm) noexcept;
std::uint32_t add(unsigned rd, unsigned rs1, unsigned rs2) noexcept;
std::uint32_t sub(unsigned rd, unsigned rs1, unsigned rs2) noexcept;
std::uint32_t lw(unsigned rd, unsigned rs1, std::int32_t imm) noexcept;
std::uint32_t sw(unsigned rs2, unsigned rs1, std::int32_t imm) noexcept;
std::uint32_t sb(unsigned rs2, unsigned rs1, std::int32_t imm) noexcept;
std::uint32_t beq(unsigned rs1, unsigned rs2, std::int32_t offset) noexcept;
std::uint32_t bne(unsigned rs1, unsigned rs2, std::int32_t offset) noexcept;
std::uint32_t jal(unsigned rd, std::int32_t offset) noexcept;
std::uint32_t jalr(unsigned rd, unsigned rs1, std::int32_t imm) noexcept;
std::uint32_t ebreak() noexcept;
/// lui + addi pair loading an arbitrary 32-bit constant.
std::vector<std::uint32_t> li(unsigned rd, std::uint32_t value);

enum class StepResult { running, halted, trap };

enum class TrapCause {
    none,
    illegal_instruction,
    fetch_fault,
    misaligned_fetch,
    load_fault,
    store_fault,
    ecall,
    step_limit,
};

std::string_view to_string(TrapCause cause) noexcept;

/// RV32I hart with flat little-endian memory starting at address 0 and an
/// attached PUF device. x0 is hardwired to zero.
class Machine {
public:
    explicit Machine(std::size_t memory_bytes = 1U << 20, PufDevice device = PufDevice());

    std::uint32_t reg(unsigned i) const noexcept { return regs_[i & 31U]; }
    void set_reg(unsigned i, std::uint32_t v) noexcept {
        if ((i & 31U) != 0) regs_[i & 31U] = v;
    }
    std::uint32_t pc() const noexcept { return pc_; }
    void set_pc(std::uint32_t pc) noexcept { pc_ = pc; }

    std::span<std::uint8_t> memory() noexcept { return memory_; }
    std::span<const std::uint8_t> memory() const noexcept { return memory_; }
    bool in_bounds(std::uint32_t addr, std::uint32_t len) const noexcept;
    /// Throws Error when the range is unmapped.
    void write_bytes(std::uint32_t addr, std::span<const std::uint8_t> bytes);
    std::vector<std::uint8_t> read_bytes(std::uint32_t addr, std::uint32_t len) const;
    void write_u32(std::uint32_t addr, std::uint32_t v);
    std::uint32_t read_u32(std::uint32_t addr) const;
    void load_words(std::uint32_t addr, std::span<const std::uint32_t> words);

    PufDevice& device() noexcept { return device_; }
    const PufDevice& device() const noexcept { return device_; }

    StepResult step();
    /// Steps until halt, trap or `max_steps`; hitting the limit is a trap
    /// with cause step_limit.
    StepResult run(std::uint64_t max_steps = 10'000'000);

    TrapCause trap_cause() const noexcept { return cause_; }
    std::uint64_t instret() const noexcept { return instret_; }
    bool halted() const noexcept { return halted_; }

private:
    void exec_inner_puf_init(const InnerPufInit& in);
    void exec_outer_puf_chal(const OuterPufChal& in);
    StepResult exec_base(const BaseInstr& in);
    StepResult trap(TrapCause cause) noexcept;

    std::array<std::uint32_t, 32> regs_{};
    std::uint32_t pc_ = 0;
    std::vector<std::uint8_t> memory_;
    PufDevice device_;
    TrapCause cause_ = TrapCause::none;
    std::uint64_t instret_ = 0;
    bool halted_ = false;
};

/// Parses "address: word" lines (hex, '#' comments) into the machine's
/// memory. Returns the lowest address loaded.
std::uint32_t load_hex_program(Machine& m, std::string_view text);
/// Copies a flat binary image to `base`.
void load_binary(Machine& m, std::span<const std::uint8_t> image, std::uint32_t base = 0);

}  // namespace risecure::isa
