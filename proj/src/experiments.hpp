#pragma once

#include <string>
#include <vector>

#include "engine.hpp"

namespace ccva {

enum class TableId { t0, t0bis, days, quantiles };

TableId parse_table_id(const std::string& s);
const char* table_name(TableId t);

struct TableRow {
    std::string table;
    std::string view = "raw";  // "raw" or "per_nu0"
    std::string reference;
    double spread = 0.0;
    double alpha = 0.0;
    double nu0 = 0.0;
    Setup setup = Setup::ccp;
    double delta_days = 0.0;
    double quantile = 0.0;
    XvaReport report;
};

// Members used as safe and risky references (spreads 61 and 367 bp in the base
// data); falls back to the scenario's own reference.
std::vector<int> showcase_references(const Scenario& s);

std::vector<TableRow> run_table(TableId id, const Scenario& base, const RunOptions& o);

// CSA rows divided by nu0 and ordered by spread; CCP rows reordered likewise.
std::vector<TableRow> per_nu0_view(const std::vector<TableRow>& t0);

struct SweepPoint {
    double a = 0.0;
    XvaReport report;
};

std::vector<double> sweep_grid(double a_min, double a_max, int steps);
std::vector<SweepPoint> sweep_quantile(const Scenario& s, const std::vector<double>& grid, const RunOptions& o);

std::string table_csv(const std::vector<TableRow>& rows);
std::string sweep_csv(const std::vector<SweepPoint>& pts);
std::string report_csv(const XvaReport& r, const Scenario& s);

void write_text(const std::string& path, const std::string& text);

}  // namespace ccva
