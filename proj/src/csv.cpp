#include "forgecurve/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

namespace forgecurve {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_step_log(std::ostream& out, const std::vector<StepLogRow>& rows) {
    out << "task_index,global_step,step_in_task,delta,tau,mu,r,beta,event,"
           "loss_task,loss_reg_scaled\n";
    for (const StepLogRow& row : rows) {
        out << row.task_index << ',' << row.global_step << ',' << row.step_in_task << ','
            << format_double(row.delta) << ',' << format_double(row.tau) << ','
            << format_double(row.mu) << ',' << format_double(row.r) << ','
            << format_double(row.beta) << ',' << step_event_name(row.event) << ','
            << format_double(row.loss_task) << ',' << format_double(row.loss_reg_scaled)
            << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const EvalMatrix& m) {
    out << "i,j,accuracy\n";
    for (int i = 1; i <= m.size(); ++i) {
        for (int j = i; j <= m.size(); ++j) {
            if (m.defined(i, j)) {
                out << i << ',' << j << ',' << format_double(m.at(i, j)) << '\n';
            }
        }
    }
}

namespace {

std::vector<std::string> split_fields(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail(const std::string& source, long line_no, const std::string& what) {
    throw ParseError(source + ", line " + std::to_string(line_no) + ": " + what);
}

long parse_long(const std::string& field, const std::string& source, long line_no) {
    if (field.empty()) fail(source, line_no, "empty integer field");
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size()) {
        fail(source, line_no, "not an integer: '" + field + "'");
    }
    return v;
}

double parse_double(const std::string& field, const std::string& source, long line_no) {
    if (field.empty()) fail(source, line_no, "empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
        fail(source, line_no, "not a number: '" + field + "'");
    }
    return v;
}

}  // namespace

EvalMatrix read_matrix_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) {
        fail(source_name, 1, "empty file, expected header 'i,j,accuracy'");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "i,j,accuracy") {
        fail(source_name, line_no, "expected header 'i,j,accuracy', got '" + line + "'");
    }

    std::map<std::pair<int, int>, double> entries;
    int max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            fail(source_name, line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        const long i = parse_long(fields[0], source_name, line_no);
        const long j = parse_long(fields[1], source_name, line_no);
        const double acc = parse_double(fields[2], source_name, line_no);
        if (i < 1 || j < i) {
            fail(source_name, line_no, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") outside the lower triangle");
        }
        if (!std::isfinite(acc) || acc < 0.0 || acc > 1.0) {
            fail(source_name, line_no, "accuracy must be finite in [0, 1], got '" + fields[2] + "'");
        }
        entries[{static_cast<int>(i), static_cast<int>(j)}] = acc;
        max_index = std::max(max_index, static_cast<int>(j));
    }
    if (entries.empty()) {
        fail(source_name, line_no + 1, "no matrix entries");
    }
    EvalMatrix m(max_index);
    for (const auto& [key, acc] : entries) {
        m.set(key.first, key.second, acc);
    }
    return m;
}

std::vector<double> read_delta_trace(std::istream& in, const std::string& source_name) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) {
        fail(source_name, 1, "empty file, expected header 'step,delta'");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "step,delta") {
        fail(source_name, line_no, "expected header 'step,delta', got '" + line + "'");
    }
    std::vector<double> deltas;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            fail(source_name, line_no, "expected 2 fields, got " + std::to_string(fields.size()));
        }
        parse_long(fields[0], source_name, line_no);
        const double delta = parse_double(fields[1], source_name, line_no);
        if (!std::isfinite(delta) || delta < 0.0) {
            fail(source_name, line_no, "delta must be finite and >= 0, got '" + fields[1] + "'");
        }
        deltas.push_back(delta);
    }
    if (deltas.empty()) {
        fail(source_name, line_no, "no delta rows");
    }
    return deltas;
}

}  // namespace forgecurve
