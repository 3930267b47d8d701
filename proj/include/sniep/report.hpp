#pragma once

// Run-record serialization: CSV, JSON and aligned text tables.

#include <iosfwd>
#include <string>
#include <vector>

#include "sniep/harness.hpp"

namespace sniep {

enum class ReportFormat { Csv, Json, Table };

ReportFormat parse_report_format(const std::string& s);

/// Header: kind,n,p,scale,variant,seed,status,CT,IT,NF,NCG,Res0,Res
inline constexpr const char* kCsvHeader =
    "kind,n,p,scale,variant,seed,status,CT,IT,NF,NCG,Res0,Res";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_json(std::ostream& out, const std::vector<RunRecord>& records);

/// One row per (kind, n, p, scale, variant) group with median CT/IT/NF/NCG,
/// median Res0/Res, mean CG iterations per outer iteration and the fraction
/// of converged runs.
void write_table(std::ostream& out, const std::vector<RunRecord>& records);

void emit_report(std::ostream& out, const std::vector<RunRecord>& records,
                 ReportFormat format);

/// Writes to `path`; throws sniep::Error naming the path on I/O failure.
void emit_report(const std::string& path, const std::vector<RunRecord>& records,
                 ReportFormat format);

std::vector<RunRecord> parse_json_records(const std::string& text);

/// CSV with header "k,res_norm".
void write_trajectory_csv(const std::string& path, const RunRecord& record);

}  // namespace sniep
