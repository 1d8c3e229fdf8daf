#pragma once

#include "risecure/attack.hpp"
#include "risecure/bench.hpp"
#include "risecure/ise.hpp"
#include "risecure/system.hpp"

#include "json.hpp"

#include <optional>

namespace risecure {

using Json = nlohmann::json;

/// {schema_version, kind, seed, params}. Responses are never stored.
Json puf_to_json(const PufInstance& puf);
PufInstance puf_from_json(const Json& j);

/// {schema_version, code_id, n, aux}: aux is lowercase hex, MSB first, with
/// the final byte zero-padded when n is not a multiple of 8.
Json helper_to_json(const HelperData& helper);
HelperData helper_from_json(const Json& j);

Json system_to_json(const SystemConfig& cfg);
SystemConfig system_from_json(const Json& j);

/// Device description for the ISA simulator:
/// {schema_version, code, buffer_capacity, hash, seed, pufs: [{idx, puf}]}.
Json device_to_json(const PufDevice& device);
PufDevice device_from_json(const Json& j);

Json to_json(const BufferCounters& c);
Json to_json(const BenchReport& r);
Json to_json(const TrainReport& r);
TrainReport train_report_from_json(const Json& j);
Json to_json(const UnpredictabilityReport& r);

/// Registers, pc, status and, optionally, a memory window as hex.
Json machine_dump(const isa::Machine& m, std::optional<std::pair<std::uint32_t, std::uint32_t>> memory_window = {});

/// Throws unless j["schema_version"] equals kSchemaVersion.
void check_schema(const Json& j, std::string_view what);

}  // namespace risecure
