#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ccva {

namespace {

const std::vector<double> kCcpQuantiles{0.70, 0.80, 0.95};
const std::vector<double> kCsaQuantiles{0.80, 0.90, 0.99};
const std::vector<double> kLiquidationDays{5.0, 15.0};

MarginConfig& margin_of(Scenario& s, Setup setup) { return setup == Setup::ccp ? s.ccp.margin : s.csa.margin; }

TableRow run_cell(const std::string& table, Scenario s, Setup setup, const RunOptions& o) {
    s.setup = setup;
    TableRow row;
    row.table = table;
    const auto& m = s.members[static_cast<std::size_t>(s.reference)];
    row.reference = m.label;
    row.spread = 0.5 * (m.spread_3y + m.spread_5y);
    row.alpha = m.alpha;
    row.setup = setup;
    row.delta_days = margin_of(s, setup).delta_days;
    row.quantile = margin_of(s, setup).quantile_a;
    row.report = setup == Setup::ccp ? ccva_estimate(s, o) : bva_estimate(s, o);
    row.nu0 = row.report.nu0;
    return row;
}

XvaReport scaled(const XvaReport& r, double f) {
    XvaReport out = r;
    for (auto* c : {&out.value, &out.se}) {
        c->cva *= f;
        c->dva *= f;
        c->mva *= f;
        c->mla *= f;
        c->kva *= f;
    }
    out.total *= f;
    out.total_se *= f;
    return out;
}

std::string bp(double x) { return fmt::format("{:.2f}", x); }

}  // namespace

TableId parse_table_id(const std::string& s) {
    if (s == "t0") return TableId::t0;
    if (s == "t0bis") return TableId::t0bis;
    if (s == "days") return TableId::days;
    if (s == "quantiles") return TableId::quantiles;
    throw ConfigError("unknown table id '" + s + "' (expected t0, t0bis, days or quantiles)");
}

const char* table_name(TableId t) {
    switch (t) {
    case TableId::t0: return "t0";
    case TableId::t0bis: return "t0bis";
    case TableId::days: return "days";
    case TableId::quantiles: return "quantiles";
    }
    return "?";
}

std::vector<int> showcase_references(const Scenario& s) {
    std::vector<int> out;
    for (double target : {61.0, 367.0})
        for (std::size_t i = 0; i < s.members.size(); ++i)
            if (s.members[i].spread_5y == target && s.members[i].alpha != 0.0) {
                out.push_back(static_cast<int>(i));
                break;
            }
    if (out.empty()) out.push_back(s.reference);
    return out;
}

std::vector<TableRow> per_nu0_view(const std::vector<TableRow>& t0) {
    std::vector<TableRow> rows;
    for (const auto& r : t0) {
        TableRow v = r;
        v.table = "t0bis";
        if (r.setup == Setup::csa) {
            v.view = "per_nu0";
            v.report = scaled(r.report, 1.0 / r.nu0);
        }
        rows.push_back(v);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
        if (a.setup != b.setup) return a.setup == Setup::csa;
        return a.spread < b.spread;
    });
    return rows;
}

std::vector<TableRow> run_table(TableId id, const Scenario& base, const RunOptions& o) {
    std::vector<TableRow> rows;
    const std::string name = table_name(id);
    switch (id) {
    case TableId::t0:
    case TableId::t0bis: {
        std::vector<int> order;
        for (std::size_t i = 0; i < base.members.size(); ++i)
            if (base.members[i].alpha != 0.0) order.push_back(static_cast<int>(i));
        std::vector<double> alphas;
        for (const auto& m : base.members) alphas.push_back(m.alpha);
        // columns by increasing compression factor
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return positions_from_alphas(alphas, a).nu0 < positions_from_alphas(alphas, b).nu0; });
        for (Setup setup : {Setup::csa, Setup::ccp})
            for (int ref : order) {
                Scenario s = base;
                s.reference = ref;
                rows.push_back(run_cell("t0", s, setup, o));
            }
        if (id == TableId::t0bis) return per_nu0_view(rows);
        return rows;
    }
    case TableId::days:
        for (int ref : showcase_references(base))
            for (Setup setup : {Setup::csa, Setup::ccp})
                for (double d : kLiquidationDays) {
                    Scenario s = base;
                    s.reference = ref;
                    margin_of(s, setup).delta_days = d;
                    TableRow row = run_cell(name, s, setup, o);
                    rows.push_back(row);
                    if (setup == Setup::csa) {
                        row.view = "per_nu0";
                        row.report = scaled(row.report, 1.0 / row.nu0);
                        rows.push_back(row);
                    }
                }
        return rows;
    case TableId::quantiles:
        for (int ref : showcase_references(base))
            for (Setup setup : {Setup::csa, Setup::ccp})
                for (double a : setup == Setup::ccp ? kCcpQuantiles : kCsaQuantiles) {
                    Scenario s = base;
                    s.reference = ref;
                    margin_of(s, setup).quantile_a = a;
                    TableRow row = run_cell(name, s, setup, o);
                    rows.push_back(row);
                    if (setup == Setup::csa) {
                        row.view = "per_nu0";
                        row.report = scaled(row.report, 1.0 / row.nu0);
                        rows.push_back(row);
                    }
                }
        return rows;
    }
    return rows;
}

std::vector<double> sweep_grid(double a_min, double a_max, int steps) {
    if (steps < 2) throw ConfigError("sweep needs at least two grid points");
    if (!(a_min > 0.0 && a_max < 1.0 && a_min < a_max)) throw ConfigError("sweep grid must satisfy 0 < a_min < a_max < 1");
    std::vector<double> g;
    for (int k = 0; k < steps; ++k) g.push_back(a_min + (a_max - a_min) * k / (steps - 1));
    return g;
}

std::vector<SweepPoint> sweep_quantile(const Scenario& s, const std::vector<double>& grid, const RunOptions& o) {
    std::vector<SweepPoint> out;
    for (double a : grid) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("quantile level must lie in (0,1)");
        Scenario c = s;
        margin_of(c, s.setup).quantile_a = a;
        out.push_back({a, s.setup == Setup::ccp ? ccva_estimate(c, o) : bva_estimate(c, o)});
    }
    return out;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out =
        "table,view,setup,reference,spread_bp,alpha,nu0,delta_days,quantile,cva,dva,mva,mla,kva,total,"
        "cva_se,dva_se,mva_se,mla_se,kva_se,total_se,paths\n";
    for (const auto& r : rows) {
        const auto& v = r.report.value;
        const auto& e = r.report.se;
        out += fmt::format("{},{},{},{},{:g},{:g},{:.2f},{:g},{:g},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.table,
                           r.view, setup_name(r.setup), r.reference, r.spread, r.alpha, r.nu0, r.delta_days,
                           r.quantile, bp(v.cva), bp(v.dva), bp(v.mva), bp(v.mla), bp(v.kva), bp(r.report.total),
                           bp(e.cva), bp(e.dva), bp(e.mva), bp(e.mla), bp(e.kva), bp(r.report.total_se),
                           r.report.n_paths);
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& pts) {
    std::string out = "a,cva,dva,mva,mla,kva,total\n";
    for (const auto& p : pts) {
        const auto& v = p.report.value;
        out += fmt::format("{:g},{},{},{},{},{},{}\n", p.a, bp(v.cva), bp(v.dva), bp(v.mva), bp(v.mla), bp(v.kva),
                           bp(p.report.total));
    }
    return out;
}

std::string report_csv(const XvaReport& r, const Scenario& s) {
    TableRow row;
    row.table = "run";
    const auto& m = s.members[static_cast<std::size_t>(r.reference)];
    row.reference = m.label;
    row.spread = 0.5 * (m.spread_3y + m.spread_5y);
    row.alpha = m.alpha;
    row.nu0 = r.nu0;
    row.setup = r.setup;
    const MarginConfig& mc = r.setup == Setup::ccp ? s.ccp.margin : s.csa.margin;
    row.delta_days = mc.delta_days;
    row.quantile = mc.quantile_a;
    row.report = r;
    return table_csv({row});
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace ccva
