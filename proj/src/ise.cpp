#include "risecure/ise.hpp"

#include "risecure/error.hpp"

#include <charconv>
#include <string>

namespace risecure::isa {

namespace {

constexpr std::uint32_t kOpLui = 0b0110111;
constexpr std::uint32_t kOpAuipc = 0b0010111;
constexpr std::uint32_t kOpJal = 0b1101111;
constexpr std::uint32_t kOpJalr = 0b1100111;
constexpr std::uint32_t kOpBranch = 0b1100011;
constexpr std::uint32_t kOpLoad = 0b0000011;
constexpr std::uint32_t kOpStore = 0b0100011;
constexpr std::uint32_t kOpImm = 0b0010011;
constexpr std::uint32_t kOpReg = 0b0110011;
constexpr std::uint32_t kOpFence = 0b0001111;
constexpr std::uint32_t kOpSystem = 0b1110011;

std::int32_t imm_i(std::uint32_t w) { return static_cast<std::int32_t>(w) >> 20; }

std::int32_t imm_s(std::uint32_t w) {
    return (static_cast<std::int32_t>(w) >> 25) * 32 | static_cast<std::int32_t>((w >> 7) & 0x1F);
}

std::int32_t imm_b(std::uint32_t w) {
    std::uint32_t v = ((w >> 31) & 1U) << 12 | ((w >> 7) & 1U) << 11 | ((w >> 25) & 0x3FU) << 5 | ((w >> 8) & 0xFU) << 1;
    return static_cast<std::int32_t>(v << 19) >> 19;
}

std::int32_t imm_j(std::uint32_t w) {
    std::uint32_t v = ((w >> 31) & 1U) << 20 | ((w >> 12) & 0xFFU) << 12 | ((w >> 20) & 1U) << 11 |
                      ((w >> 21) & 0x3FFU) << 1;
    return static_cast<std::int32_t>(v << 11) >> 11;
}

std::uint32_t r_type(std::uint32_t f7, unsigned rs2, unsigned rs1, std::uint32_t f3, unsigned rd, std::uint32_t op) {
    return encode_fields({f7, rs2, rs1, f3, rd, op});
}

std::uint32_t i_type(std::int32_t imm, unsigned rs1, std::uint32_t f3, unsigned rd, std::uint32_t op) {
    return (static_cast<std::uint32_t>(imm) & 0xFFFU) << 20 | (rs1 & 31U) << 15 | (f3 & 7U) << 12 | (rd & 31U) << 7 |
           op;
}

std::uint32_t s_type(std::int32_t imm, unsigned rs2, unsigned rs1, std::uint32_t f3, std::uint32_t op) {
    const auto u = static_cast<std::uint32_t>(imm);
    return ((u >> 5) & 0x7FU) << 25 | (rs2 & 31U) << 20 | (rs1 & 31U) << 15 | (f3 & 7U) << 12 | (u & 0x1FU) << 7 |
           op;
}

std::uint32_t b_type(std::int32_t offset, unsigned rs2, unsigned rs1, std::uint32_t f3) {
    const auto u = static_cast<std::uint32_t>(offset);
    return ((u >> 12) & 1U) << 31 | ((u >> 5) & 0x3FU) << 25 | (rs2 & 31U) << 20 | (rs1 & 31U) << 15 |
           (f3 & 7U) << 12 | ((u >> 1) & 0xFU) << 8 | ((u >> 11) & 1U) << 7 | kOpBranch;
}

std::optional<Op> branch_op(std::uint32_t f3) {
    switch (f3) {
        case 0b000: return Op::beq;
        case 0b001: return Op::bne;
        case 0b100: return Op::blt;
        case 0b101: return Op::bge;
        case 0b110: return Op::bltu;
        case 0b111: return Op::bgeu;
        default: return std::nullopt;
    }
}

std::optional<Op> load_op(std::uint32_t f3) {
    switch (f3) {
        case 0b000: return Op::lb;
        case 0b001: return Op::lh;
        case 0b010: return Op::lw;
        case 0b100: return Op::lbu;
        case 0b101: return Op::lhu;
        default: return std::nullopt;
    }
}

std::optional<Op> store_op(std::uint32_t f3) {
    switch (f3) {
        case 0b000: return Op::sb;
        case 0b001: return Op::sh;
        case 0b010: return Op::sw;
        default: return std::nullopt;
    }
}

std::optional<Op> imm_op(std::uint32_t f3, std::uint32_t f7) {
    switch (f3) {
        case 0b000: return Op::addi;
        case 0b010: return Op::slti;
        case 0b011: return Op::sltiu;
        case 0b100: return Op::xori;
        case 0b110: return Op::ori;
        case 0b111: return Op::andi;
        case 0b001: return f7 == 0 ? std::optional(Op::slli) : std::nullopt;
        case 0b101:
            if (f7 == 0) return Op::srli;
            if (f7 == 0b0100000) return Op::srai;
            return std::nullopt;
        default: return std::nullopt;
    }
}

std::optional<Op> reg_op(std::uint32_t f3, std::uint32_t f7) {
    if (f7 == 0) {
        static constexpr Op ops[] = {Op::add, Op::sll, Op::slt, Op::sltu, Op::xor_, Op::srl, Op::or_, Op::and_};
        return ops[f3];
    }
    if (f7 == 0b0100000) {
        if (f3 == 0b000) return Op::sub;
        if (f3 == 0b101) return Op::sra;
    }
    return std::nullopt;
}

}  // namespace

Fields fields_of(std::uint32_t w) noexcept {
    return {w >> 25, (w >> 20) & 31U, (w >> 15) & 31U, (w >> 12) & 7U, (w >> 7) & 31U, w & 0x7FU};
}

std::uint32_t encode_fields(const Fields& f) noexcept {
    return (f.funct7 & 0x7FU) << 25 | (f.rs2 & 31U) << 20 | (f.rs1 & 31U) << 15 | (f.funct3 & 7U) << 12 |
           (f.rd & 31U) << 7 | (f.opcode & 0x7FU);
}

std::optional<DecodedInstr> decode(std::uint32_t w) noexcept {
    const Fields f = fields_of(w);
    const auto rd = static_cast<std::uint8_t>(f.rd);
    const auto rs1 = static_cast<std::uint8_t>(f.rs1);
    const auto rs2 = static_cast<std::uint8_t>(f.rs2);
    auto base = [&](Op op, std::int32_t imm) -> std::optional<DecodedInstr> {
        return DecodedInstr{BaseInstr{op, rd, rs1, rs2, imm}, f};
    };
    auto base_opt = [&](std::optional<Op> op, std::int32_t imm) -> std::optional<DecodedInstr> {
        if (!op) return std::nullopt;
        return base(*op, imm);
    };

    switch (f.opcode) {
        case kCustomOpcode:
            if (f.funct7 != 0) return std::nullopt;
            if (f.funct3 == kFunct3InnerInit && f.rs2 == 0) return DecodedInstr{InnerPufInit{rs1, rd}, f};
            if (f.funct3 == kFunct3OuterChal) return DecodedInstr{OuterPufChal{rs1, rs2, rd}, f};
            return std::nullopt;
        case kOpLui: return base(Op::lui, static_cast<std::int32_t>(w & 0xFFFFF000U));
        case kOpAuipc: return base(Op::auipc, static_cast<std::int32_t>(w & 0xFFFFF000U));
        case kOpJal: return base(Op::jal, imm_j(w));
        case kOpJalr: return f.funct3 == 0 ? base(Op::jalr, imm_i(w)) : std::nullopt;
        case kOpBranch: return base_opt(branch_op(f.funct3), imm_b(w));
        case kOpLoad: return base_opt(load_op(f.funct3), imm_i(w));
        case kOpStore: return base_opt(store_op(f.funct3), imm_s(w));
        case kOpImm: {
            const bool shift = f.funct3 == 0b001 || f.funct3 == 0b101;
            return base_opt(imm_op(f.funct3, f.funct7), shift ? static_cast<std::int32_t>(f.rs2) : imm_i(w));
        }
        case kOpReg: return base_opt(reg_op(f.funct3, f.funct7), 0);
        case kOpFence: return f.funct3 == 0 ? base(Op::fence, 0) : std::nullopt;
        case kOpSystem:
            if (w == 0x00000073U) return base(Op::ecall, 0);
            if (w == 0x00100073U) return base(Op::ebreak, 0);
            return std::nullopt;
        default: return std::nullopt;
    }
}

std::uint32_t inner_puf_init(unsigned rd, unsigned rs1) noexcept {
    return r_type(0, 0, rs1, kFunct3InnerInit, rd, kCustomOpcode);
}
std::uint32_t outer_puf_chal(unsigned rd, unsigned rs1, unsigned rs2) noexcept {
    return r_type(0, rs2, rs1, kFunct3OuterChal, rd, kCustomOpcode);
}
std::uint32_t lui(unsigned rd, std::uint32_t imm20) noexcept { return (imm20 & 0xFFFFFU) << 12 | (rd & 31U) << 7 | kOpLui; }
std::uint32_t addi(unsigned rd, unsigned rs1, std::int32_t imm) noexcept { return i_type(imm, rs1, 0, rd, kOpImm); }
std::uint32_t add(unsigned rd, unsigned rs1, unsigned rs2) noexcept { return r_type(0, rs2, rs1, 0, rd, kOpReg); }
std::uint32_t sub(unsigned rd, unsigned rs1, unsigned rs2) noexcept { return r_type(0b0100000, rs2, rs1, 0, rd, kOpReg); }
std::uint32_t lw(unsigned rd, unsigned rs1, std::int32_t imm) noexcept { return i_type(imm, rs1, 0b010, rd, kOpLoad); }
std::uint32_t sw(unsigned rs2, unsigned rs1, std::int32_t imm) noexcept { return s_type(imm, rs2, rs1, 0b010, kOpStore); }
std::uint32_t sb(unsigned rs2, unsigned rs1, std::int32_t imm) noexcept { return s_type(imm, rs2, rs1, 0b000, kOpStore); }
std::uint32_t beq(unsigned rs1, unsigned rs2, std::int32_t offset) noexcept { return b_type(offset, rs2, rs1, 0b000); }
std::uint32_t bne(unsigned rs1, unsigned rs2, std::int32_t offset) noexcept { return b_type(offset, rs2, rs1, 0b001); }
std::uint32_t jal(unsigned rd, std::int32_t offset) noexcept {
    const auto u = static_cast<std::uint32_t>(offset);
    return ((u >> 20) & 1U) << 31 | ((u >> 1) & 0x3FFU) << 21 | ((u >> 11) & 1U) << 20 | ((u >> 12) & 0xFFU) << 12 |
           (rd & 31U) << 7 | kOpJal;
}
std::uint32_t jalr(unsigned rd, unsigned rs1, std::int32_t imm) noexcept { return i_type(imm, rs1, 0, rd, kOpJalr); }
std::uint32_t ebreak() noexcept { return 0x00100073U; }

std::vector<std::uint32_t> li(unsigned rd, std::uint32_t value) {
    // addi sign-extends, so round the upper part up when bit 11 is set.
    const std::uint32_t upper = (value + 0x800U) >> 12;
    const auto lower = static_cast<std::int32_t>(value << 20) >> 20;
    return {lui(rd, upper), addi(rd, rd, lower)};
}

std::string_view to_string(TrapCause cause) noexcept {
    switch (cause) {
        case TrapCause::none: return "none";
        case TrapCause::illegal_instruction: return "illegal_instruction";
        case TrapCause::fetch_fault: return "fetch_fault";
        case TrapCause::misaligned_fetch: return "misaligned_fetch";
        case TrapCause::load_fault: return "load_fault";
        case TrapCause::store_fault: return "store_fault";
        case TrapCause::ecall: return "ecall";
        case TrapCause::step_limit: return "step_limit";
    }
    return "?";
}

Machine::Machine(std::size_t memory_bytes, PufDevice device)
    : memory_(memory_bytes, 0), device_(std::move(device)) {
    if (memory_bytes == 0 || memory_bytes > 0xFFFFFFFFULL) throw Error("Machine: memory size must be in [1, 4 GiB)");
}

bool Machine::in_bounds(std::uint32_t addr, std::uint32_t len) const noexcept {
    return static_cast<std::uint64_t>(addr) + len <= memory_.size();
}

void Machine::write_bytes(std::uint32_t addr, std::span<const std::uint8_t> bytes) {
    if (!in_bounds(addr, static_cast<std::uint32_t>(bytes.size()))) throw Error("write outside machine memory");
    std::copy(bytes.begin(), bytes.end(), memory_.begin() + addr);
}

std::vector<std::uint8_t> Machine::read_bytes(std::uint32_t addr, std::uint32_t len) const {
    if (!in_bounds(addr, len)) throw Error("read outside machine memory");
    return {memory_.begin() + addr, memory_.begin() + addr + len};
}

void Machine::write_u32(std::uint32_t addr, std::uint32_t v) {
    const std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                               static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
    write_bytes(addr, b);
}

std::uint32_t Machine::read_u32(std::uint32_t addr) const {
    const auto b = read_bytes(addr, 4);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void Machine::load_words(std::uint32_t addr, std::span<const std::uint32_t> words) {
    for (std::size_t i = 0; i < words.size(); ++i) write_u32(addr + static_cast<std::uint32_t>(4 * i), words[i]);
}

StepResult Machine::trap(TrapCause cause) noexcept {
    cause_ = cause;
    return StepResult::trap;
}

StepResult Machine::step() {
    if (halted_) return StepResult::halted;
    if (cause_ != TrapCause::none) return StepResult::trap;
    if (pc_ % 4 != 0) return trap(TrapCause::misaligned_fetch);
    if (!in_bounds(pc_, 4)) return trap(TrapCause::fetch_fault);

    const auto decoded = decode(read_u32(pc_));
    if (!decoded) return trap(TrapCause::illegal_instruction);

    StepResult result = StepResult::running;
    if (const auto* init = std::get_if<InnerPufInit>(&decoded->instr)) {
        exec_inner_puf_init(*init);
        pc_ += 4;
    } else if (const auto* chal = std::get_if<OuterPufChal>(&decoded->instr)) {
        exec_outer_puf_chal(*chal);
        pc_ += 4;
    } else {
        result = exec_base(std::get<BaseInstr>(decoded->instr));
    }
    if (result != StepResult::trap) ++instret_;
    return result;
}

StepResult Machine::run(std::uint64_t max_steps) {
    for (std::uint64_t i = 0; i < max_steps; ++i) {
        const auto r = step();
        if (r != StepResult::running) return r;
    }
    return trap(TrapCause::step_limit);
}

void Machine::exec_inner_puf_init(const InnerPufInit& in) {
    const std::uint32_t addr = reg(in.rs1);
    if (!in_bounds(addr, kInitBlockBytes)) {
        set_reg(in.rd, static_cast<std::uint32_t>(PufStatus::memory_fault));
        return;
    }
    const std::uint32_t idx = read_u32(addr);
    const std::uint64_t c0 = static_cast<std::uint64_t>(read_u32(addr + 4)) |
                             static_cast<std::uint64_t>(read_u32(addr + 8)) << 32;
    const PufStatus st = device_.inner_puf_init(idx, Challenge::from_u64(c0));
    set_reg(in.rd, static_cast<std::uint32_t>(st));
}

void Machine::exec_outer_puf_chal(const OuterPufChal& in) {
    const std::uint32_t in_addr = reg(in.rs1);
    const std::uint32_t out_addr = reg(in.rs2);
    if (!in_bounds(in_addr, kChalBlockBytes) || !in_bounds(out_addr, kDigestBytes)) {
        set_reg(in.rd, static_cast<std::uint32_t>(PufStatus::memory_fault));
        return;
    }
    const std::uint32_t idx = read_u32(in_addr);
    const auto c_bytes = read_bytes(in_addr + 4, 16);
    auto [st, r3] = device_.outer_puf_chal(idx, OuterChallenge{Bits::from_bytes(c_bytes, kOuterChallengeBits)});
    if (st == PufStatus::ok) write_bytes(out_addr, r3->digest);
    set_reg(in.rd, static_cast<std::uint32_t>(st));
}

StepResult Machine::exec_base(const BaseInstr& in) {
    const std::uint32_t a = reg(in.rs1);
    const std::uint32_t b = reg(in.rs2);
    const auto imm = static_cast<std::uint32_t>(in.imm);
    const auto sa = static_cast<std::int32_t>(a);
    const auto sb_ = static_cast<std::int32_t>(b);
    std::uint32_t next_pc = pc_ + 4;

    auto jump = [&](std::uint32_t target) -> bool {
        if (target % 4 != 0) return false;
        next_pc = target;
        return true;
    };
    auto load = [&](std::uint32_t addr, std::uint32_t len, bool sign) -> std::optional<std::uint32_t> {
        if (!in_bounds(addr, len)) return std::nullopt;
        std::uint32_t v = 0;
        for (std::uint32_t i = 0; i < len; ++i) v |= static_cast<std::uint32_t>(memory_[addr + i]) << (8 * i);
        if (sign && len < 4) {
            const std::uint32_t shift = 32 - 8 * len;
            v = static_cast<std::uint32_t>(static_cast<std::int32_t>(v << shift) >> shift);
        }
        return v;
    };
    auto store = [&](std::uint32_t addr, std::uint32_t len, std::uint32_t v) -> bool {
        if (!in_bounds(addr, len)) return false;
        for (std::uint32_t i = 0; i < len; ++i) memory_[addr + i] = static_cast<std::uint8_t>(v >> (8 * i));
        return true;
    };

    switch (in.op) {
        case Op::lui: set_reg(in.rd, imm); break;
        case Op::auipc: set_reg(in.rd, pc_ + imm); break;
        case Op::jal:
            if (!jump(pc_ + imm)) return trap(TrapCause::misaligned_fetch);
            set_reg(in.rd, pc_ + 4);
            break;
        case Op::jalr:
            if (!jump((a + imm) & ~1U)) return trap(TrapCause::misaligned_fetch);
            set_reg(in.rd, pc_ + 4);
            break;
        case Op::beq:
        case Op::bne:
        case Op::blt:
        case Op::bge:
        case Op::bltu:
        case Op::bgeu: {
            bool taken = false;
            switch (in.op) {
                case Op::beq: taken = a == b; break;
                case Op::bne: taken = a != b; break;
                case Op::blt: taken = sa < sb_; break;
                case Op::bge: taken = sa >= sb_; break;
                case Op::bltu: taken = a < b; break;
                default: taken = a >= b; break;
            }
            if (taken && !jump(pc_ + imm)) return trap(TrapCause::misaligned_fetch);
            break;
        }
        case Op::lb:
        case Op::lh:
        case Op::lw:
        case Op::lbu:
        case Op::lhu: {
            const std::uint32_t len = (in.op == Op::lb || in.op == Op::lbu) ? 1 : (in.op == Op::lw ? 4 : 2);
            const auto v = load(a + imm, len, in.op == Op::lb || in.op == Op::lh);
            if (!v) return trap(TrapCause::load_fault);
            set_reg(in.rd, *v);
            break;
        }
        case Op::sb:
            if (!store(a + imm, 1, b)) return trap(TrapCause::store_fault);
            break;
        case Op::sh:
            if (!store(a + imm, 2, b)) return trap(TrapCause::store_fault);
            break;
        case Op::sw:
            if (!store(a + imm, 4, b)) return trap(TrapCause::store_fault);
            break;
        case Op::addi: set_reg(in.rd, a + imm); break;
        case Op::slti: set_reg(in.rd, sa < in.imm ? 1 : 0); break;
        case Op::sltiu: set_reg(in.rd, a < imm ? 1 : 0); break;
        case Op::xori: set_reg(in.rd, a ^ imm); break;
        case Op::ori: set_reg(in.rd, a | imm); break;
        case Op::andi: set_reg(in.rd, a & imm); break;
        case Op::slli: set_reg(in.rd, a << (imm & 31U)); break;
        case Op::srli: set_reg(in.rd, a >> (imm & 31U)); break;
        case Op::srai: set_reg(in.rd, static_cast<std::uint32_t>(sa >> (imm & 31U))); break;
        case Op::add: set_reg(in.rd, a + b); break;
        case Op::sub: set_reg(in.rd, a - b); break;
        case Op::sll: set_reg(in.rd, a << (b & 31U)); break;
        case Op::slt: set_reg(in.rd, sa < sb_ ? 1 : 0); break;
        case Op::sltu: set_reg(in.rd, a < b ? 1 : 0); break;
        case Op::xor_: set_reg(in.rd, a ^ b); break;
        case Op::srl: set_reg(in.rd, a >> (b & 31U)); break;
        case Op::sra: set_reg(in.rd, static_cast<std::uint32_t>(sa >> (b & 31U))); break;
        case Op::or_: set_reg(in.rd, a | b); break;
        case Op::and_: set_reg(in.rd, a & b); break;
        case Op::fence: break;
        case Op::ecall: return trap(TrapCause::ecall);
        case Op::ebreak:
            halted_ = true;
            return StepResult::halted;
    }
    pc_ = next_pc;
    return StepResult::running;
}

std::uint32_t load_hex_program(Machine& m, std::string_view text) {
    std::uint32_t lowest = 0xFFFFFFFFU;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
            if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
            return s;
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw Error("hex program line " + std::to_string(line_no) + ": missing ':'");
        const auto addr_s = trim(line.substr(0, colon));
        const auto word_s = trim(line.substr(colon + 1));
        std::uint32_t addr = 0;
        std::uint32_t word = 0;
        auto r1 = std::from_chars(addr_s.data(), addr_s.data() + addr_s.size(), addr, 16);
        auto r2 = std::from_chars(word_s.data(), word_s.data() + word_s.size(), word, 16);
        if (r1.ec != std::errc{} || r1.ptr != addr_s.data() + addr_s.size() || r2.ec != std::errc{} ||
            r2.ptr != word_s.data() + word_s.size()) {
            throw Error("hex program line " + std::to_string(line_no) + ": malformed");
        }
        if (addr % 4 != 0) throw Error("hex program line " + std::to_string(line_no) + ": unaligned address");
        m.write_u32(addr, word);
        lowest = std::min(lowest, addr);
    }
    if (lowest == 0xFFFFFFFFU) throw Error("hex program is empty");
    return lowest;
}

void load_binary(Machine& m, std::span<const std::uint8_t> image, std::uint32_t base) { m.write_bytes(base, image); }

}  // namespace risecure::isa
