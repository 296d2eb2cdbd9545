#ifndef BHSM_SCENARIO_IO_HPP
#define BHSM_SCENARIO_IO_HPP

#include <string>
#include <string_view>

#include "metrics.hpp"
#include "sim.hpp"
#include "verify.hpp"

namespace bhsm {

/// Parses a scenario from sectioned key-value text ([hong], [mode],
/// [schedule], [uncertainty], [sim]). Unknown sections or keys are rejected
/// with a line-anchored ConfigError.
Scenario parse_scenario(std::string_view text, std::string name);
Scenario load_scenario(const std::string& path);

/// Controller parameters alone ([hong] section). A full scenario file is also
/// accepted; its controller block is used.
HongParams parse_hong_params(std::string_view text, std::string name);
HongParams load_hong_params(const std::string& path);

/// CSV trace serialization: header t,z1,...,zr,u,V,eta,phi_hat with 17
/// significant digits per field; eta/phi_hat left empty without a schedule.
std::string trace_to_csv(const Trace& trace);
void write_trace_csv(const Trace& trace, const std::string& path);
Trace parse_trace_csv(std::string_view text, std::string_view origin = "<csv>");
Trace read_trace_csv(const std::string& path);

/// Metrics as a JSON object mirroring the SummaryMetrics field names;
/// undefined optionals are omitted.
std::string metrics_to_json(const SummaryMetrics& metrics);
void write_metrics_json(const SummaryMetrics& metrics, const std::string& path);

std::string verify_report_to_json(const VerifyReport& report);

}  // namespace bhsm

#endif
