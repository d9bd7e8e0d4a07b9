#include "lopf/mps.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace lopf {

namespace {

// field start columns (0-based) and widths of fixed-format MPS
constexpr int kFieldStart[6] = {1, 4, 14, 24, 39, 49};
constexpr int kFieldWidth[6] = {2, 8, 8, 12, 8, 12};

void put_field(std::string& line, int field, const std::string& text) {
    int start = kFieldStart[field];
    if (static_cast<int>(line.size()) < start) line.resize(static_cast<std::size_t>(start), ' ');
    line += text;
    (void)kFieldWidth;
}

std::string fmt12(double v) {
    char buf[64];
    for (int prec = 10; prec >= 1; --prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::string_view(buf).size() <= 12) break;
    }
    return buf;
}

std::string mangle(char prefix, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%07d", prefix, index + 1);
    return buf;
}

}  // namespace

MpsDocument export_mps(const LpProblem& lp) {
    MpsDocument doc;
    std::ostringstream out;

    std::vector<std::string> row_names(lp.constraints.size());
    for (std::size_t i = 0; i < lp.constraints.size(); ++i)
        row_names[i] = mangle('R', static_cast<int>(i));
    std::vector<std::string> col_names(lp.variables.size());
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        col_names[j] = mangle('C', static_cast<int>(j));
        doc.name_map.emplace(lp.variables[j].name, col_names[j]);
    }

    {
        std::string line = "NAME";
        put_field(line, 2, "LOPF");
        out << line << "\n";
    }

    out << "ROWS\n";
    {
        std::string line;
        put_field(line, 0, "N");
        put_field(line, 1, "COST");
        out << line << "\n";
    }
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        std::string rel;
        switch (lp.constraints[i].rel) {
            case Relation::le: rel = "L"; break;
            case Relation::eq: rel = "E"; break;
            case Relation::ge: rel = "G"; break;
        }
        std::string line;
        put_field(line, 0, rel);
        put_field(line, 1, row_names[i]);
        out << line << "\n";
    }

    out << "COLUMNS\n";
    // entries grouped per column: objective first, then constraint rows
    std::vector<std::vector<std::pair<int, double>>> col_entries(lp.variables.size());
    for (std::size_t i = 0; i < lp.constraints.size(); ++i)
        for (const auto& [j, a] : lp.constraints[i].coeffs)
            if (a != 0.0)
                col_entries[static_cast<std::size_t>(j)].emplace_back(static_cast<int>(i), a);
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        auto emit = [&](const std::string& row, double v) {
            std::string line;
            put_field(line, 1, col_names[j]);
            put_field(line, 2, row);
            put_field(line, 3, fmt12(v));
            out << line << "\n";
        };
        // always declare the column, even with an all-zero profile, so
        // BOUNDS entries can refer to it after a round trip
        if (lp.variables[j].objective != 0.0 || col_entries[j].empty())
            emit("COST", lp.variables[j].objective);
        for (const auto& [row, v] : col_entries[j])
            emit(row_names[static_cast<std::size_t>(row)], v);
    }

    out << "RHS\n";
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        if (lp.constraints[i].rhs == 0.0) continue;
        std::string line;
        put_field(line, 1, "RHS");
        put_field(line, 2, row_names[i]);
        put_field(line, 3, fmt12(lp.constraints[i].rhs));
        out << line << "\n";
    }

    out << "RANGES\n";  // no ranged rows are produced

    out << "BOUNDS\n";
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        const auto& v = lp.variables[j];
        auto emit = [&](const char* key, double val, bool has_value) {
            std::string line;
            put_field(line, 0, key);
            put_field(line, 1, "BND");
            put_field(line, 2, col_names[j]);
            if (has_value) put_field(line, 3, fmt12(val));
            out << line << "\n";
        };
        bool lo_inf = !std::isfinite(v.lower), up_inf = !std::isfinite(v.upper);
        if (!lo_inf && !up_inf && v.lower == v.upper) {
            emit("FX", v.lower, true);
        } else if (lo_inf && up_inf) {
            emit("FR", 0, false);
        } else {
            if (lo_inf)
                emit("MI", 0, false);
            else if (v.lower != 0.0)
                emit("LO", v.lower, true);
            if (!up_inf) emit("UP", v.upper, true);
        }
    }

    out << "ENDATA\n";
    doc.text = out.str();
    return doc;
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

double mps_number(const std::string& tok, std::size_t lineno) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw MpsParseError("MPS parse error, line " + std::to_string(lineno) +
                            ": bad number '" + tok + "'");
    }
}

}  // namespace

LpProblem import_mps(const std::string& text) {
    LpProblem lp;
    enum Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } section = None;
    std::string objective_row;
    struct RowInfo {
        Relation rel;
        int index;  // into lp.constraints, -1 for objective
    };
    std::unordered_map<std::string, RowInfo> rows;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool saw_name = false;
    auto fail = [](std::size_t ln, const std::string& what) -> void {
        throw MpsParseError("MPS parse error, line " + std::to_string(ln) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '*') continue;  // comment

        bool indented = line[0] == ' ' || line[0] == '\t';
        auto toks = tokens_of(line);
        if (toks.empty()) continue;

        if (!indented) {
            const std::string& head = toks[0];
            if (head == "NAME") {
                saw_name = true;
                continue;
            } else if (head == "ROWS") {
                section = Rows;
            } else if (head == "COLUMNS") {
                section = Columns;
            } else if (head == "RHS") {
                section = Rhs;
            } else if (head == "RANGES") {
                section = Ranges;
            } else if (head == "BOUNDS") {
                section = Bounds;
            } else if (head == "ENDATA") {
                section = Done;
                break;
            } else {
                fail(lineno, "unknown section '" + head + "'");
            }
            if (!saw_name && section != None) fail(lineno, "missing NAME header");
            continue;
        }

        switch (section) {
            case Rows: {
                if (toks.size() != 2) fail(lineno, "expected '<type> <row>'");
                const std::string& type = toks[0];
                const std::string& name = toks[1];
                if (type == "N") {
                    if (objective_row.empty()) objective_row = name;
                    rows[name] = {Relation::eq, -1};
                } else {
                    Relation rel;
                    if (type == "E")
                        rel = Relation::eq;
                    else if (type == "L")
                        rel = Relation::le;
                    else if (type == "G")
                        rel = Relation::ge;
                    else {
                        fail(lineno, "unknown row type '" + type + "'");
                        return lp;
                    }
                    rows[name] = {rel, static_cast<int>(lp.constraints.size())};
                    lp.constraints.push_back({name, {}, rel, 0.0});
                }
                break;
            }
            case Columns: {
                if (toks.size() != 3 && toks.size() != 5)
                    fail(lineno, "expected '<col> <row> <value> [<row> <value>]'");
                int j = lp.variable(toks[0]);
                if (j < 0) j = lp.add_variable(toks[0], 0.0, kInf, 0.0);
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    auto it = rows.find(toks[k]);
                    if (it == rows.end()) fail(lineno, "unknown row '" + toks[k] + "'");
                    double v = mps_number(toks[k + 1], lineno);
                    if (it->second.index < 0)
                        lp.variables[static_cast<std::size_t>(j)].objective = v;
                    else
                        lp.constraints[static_cast<std::size_t>(it->second.index)]
                            .coeffs.emplace_back(j, v);
                }
                break;
            }
            case Rhs: {
                if (toks.size() != 3 && toks.size() != 5)
                    fail(lineno, "expected '<set> <row> <value> [<row> <value>]'");
                for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
                    auto it = rows.find(toks[k]);
                    if (it == rows.end()) fail(lineno, "unknown row '" + toks[k] + "'");
                    if (it->second.index >= 0)
                        lp.constraints[static_cast<std::size_t>(it->second.index)].rhs =
                            mps_number(toks[k + 1], lineno);
                }
                break;
            }
            case Ranges:
                fail(lineno, "ranged rows are not supported");
                break;
            case Bounds: {
                if (toks.size() < 3) fail(lineno, "expected '<key> <set> <col> [<value>]'");
                const std::string& key = toks[0];
                int j = lp.variable(toks[2]);
                if (j < 0) fail(lineno, "unknown column '" + toks[2] + "'");
                auto& v = lp.variables[static_cast<std::size_t>(j)];
                auto need_value = [&]() -> double {
                    if (toks.size() < 4) fail(lineno, "bound key '" + key + "' needs a value");
                    return mps_number(toks[3], lineno);
                };
                if (key == "UP")
                    v.upper = need_value();
                else if (key == "LO")
                    v.lower = need_value();
                else if (key == "FX")
                    v.lower = v.upper = need_value();
                else if (key == "FR") {
                    v.lower = -kInf;
                    v.upper = kInf;
                } else if (key == "MI")
                    v.lower = -kInf;
                else if (key == "PL")
                    v.upper = kInf;
                else
                    fail(lineno, "unknown bound key '" + key + "'");
                break;
            }
            case None:
            case Done:
                fail(lineno, "data outside any section");
        }
    }
    if (section != Done) fail(lineno ? lineno : 1, "missing ENDATA");
    return lp;
}

SolveResult solve_external(const LpProblem& lp, const std::string& command_template,
                           int threads) {
    auto t0 = std::chrono::steady_clock::now();
    MpsDocument doc = export_mps(lp);

    auto tmp = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    std::string stem = "lopf_" + std::to_string(rng() & 0xffffffu);
    auto mps_path = tmp / (stem + ".mps");
    auto sol_path = tmp / (stem + ".sol");
    auto log_path = tmp / (stem + ".log");
    {
        std::ofstream out(mps_path, std::ios::binary);
        out << doc.text;
    }

    std::string cmd = command_template;
    auto replace_all = [&cmd](const std::string& key, const std::string& value) {
        for (std::size_t p; (p = cmd.find(key)) != std::string::npos;)
            cmd.replace(p, key.size(), value);
    };
    replace_all("{mps}", mps_path.string());
    replace_all("{sol}", sol_path.string());
    replace_all("{threads}", std::to_string(threads));
    cmd += " > " + log_path.string() + " 2>&1";

    int rc = std::system(cmd.c_str());
    auto cleanup = [&] {
        std::error_code ec;
        std::filesystem::remove(mps_path, ec);
        std::filesystem::remove(sol_path, ec);
        std::filesystem::remove(log_path, ec);
    };
    if (rc != 0) {
        std::ifstream log(log_path);
        std::ostringstream buf;
        buf << log.rdbuf();
        cleanup();
        throw LpError("external solver exited with code " + std::to_string(rc) + ": " +
                      buf.str());
    }

    std::unordered_map<std::string, double> by_mangled;
    {
        std::ifstream sol(sol_path);
        if (!sol) {
            cleanup();
            throw LpError("external solver produced no solution file");
        }
        std::string sline;
        std::size_t ln = 0;
        while (std::getline(sol, sline)) {
            ++ln;
            if (sline.empty() || sline[0] == '#') continue;
            std::istringstream in(sline);
            std::string name;
            double value;
            if (!(in >> name >> value)) {
                cleanup();
                throw LpError("unparsable solution file line " + std::to_string(ln));
            }
            by_mangled[name] = value;
        }
    }
    cleanup();

    SolveResult res;
    res.status = SolveStatus::optimal;
    res.objective = 0;
    for (const auto& v : lp.variables) {
        auto mangled = doc.name_map.at(v.name);
        auto it = by_mangled.find(mangled);
        if (it == by_mangled.end())
            throw LpError("solution file missing variable '" + v.name + "'");
        res.values[v.name] = it->second;
        res.objective += v.objective * it->second;
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace lopf
