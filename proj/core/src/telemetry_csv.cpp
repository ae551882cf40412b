#include "emff/telemetry_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace emff {

namespace {

std::string fmt9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    std::ostringstream out;
    out << source << ":" << line << ": " << msg;
    throw CsvError(out.str());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

std::string telemetry_to_csv(const Telemetry& tel) {
    std::ostringstream out;
    out << "t_s";
    for (const auto& [i, j] : tel.pair_order) {
        const std::string suffix = "_" + std::to_string(i) + "_" + std::to_string(j);
        out << ",q_m" << suffix << ",r_hat_m" << suffix << ",v_hat_mps" << suffix
            << ",I_amp_A" << suffix << ",F_hat_N" << suffix;
    }
    out << "\n";
    for (const auto& row : tel.rows) {
        out << fmt9(row.t);
        for (const auto& p : row.pairs) {
            out << "," << fmt9(p.q) << "," << fmt9(p.r_hat) << "," << fmt9(p.v_hat)
                << "," << fmt9(p.current) << "," << fmt9(p.f_hat);
        }
        out << "\n";
    }
    return out.str();
}

Telemetry telemetry_from_csv(const std::string& text, const std::string& source_name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        fail(source_name, 1, "missing header row");
    }
    const std::vector<std::string> header = split_csv(line);
    if (header.empty() || header[0] != "t_s") {
        fail(source_name, 1, "first column must be t_s");
    }
    if (header.size() < 6 || (header.size() - 1) % 5 != 0) {
        fail(source_name, 1, "expected t_s plus five columns per ordered pair");
    }
    Telemetry tel;
    for (std::size_t c = 1; c < header.size(); c += 5) {
        const std::string& name = header[c];
        if (name.rfind("q_m_", 0) != 0) {
            fail(source_name, 1, "expected q_m_i_j column, got '" + name + "'");
        }
        std::string rest = name.substr(4);
        const std::size_t sep = rest.find('_');
        if (sep == std::string::npos) {
            fail(source_name, 1, "cannot parse pair ids from '" + name + "'");
        }
        const int i = std::atoi(rest.substr(0, sep).c_str());
        const int j = std::atoi(rest.substr(sep + 1).c_str());
        if (i < 1 || j < 1 || i == j) {
            fail(source_name, 1, "invalid pair ids in '" + name + "'");
        }
        tel.pair_order.emplace_back(i, j);
    }

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != header.size()) {
            fail(source_name, line_no, "wrong field count");
        }
        std::vector<double> vals;
        for (const std::string& f : fields) {
            char* end = nullptr;
            const double x = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0') {
                fail(source_name, line_no, "not a number: '" + f + "'");
            }
            vals.push_back(x);
        }
        TelemetryRow row;
        row.t = vals[0];
        if (!tel.rows.empty() && row.t <= tel.rows.back().t) {
            fail(source_name, line_no, "time column must increase");
        }
        for (std::size_t c = 1; c < vals.size(); c += 5) {
            PairSample p;
            p.q = vals[c];
            p.r_hat = vals[c + 1];
            p.v_hat = vals[c + 2];
            p.current = vals[c + 3];
            p.f_hat = vals[c + 4];
            row.pairs.push_back(p);
        }
        tel.rows.push_back(row);
    }
    if (tel.rows.empty()) {
        fail(source_name, line_no, "no data rows");
    }
    return tel;
}

void write_telemetry_csv(const Telemetry& tel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError(path + ": cannot open for writing");
    out << telemetry_to_csv(tel);
}

Telemetry read_telemetry_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return telemetry_from_csv(buf.str(), path);
}

} // namespace emff
