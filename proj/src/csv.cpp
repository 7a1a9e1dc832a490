#include "ngrid/csv.hpp"

#include <cstdio>
#include <sstream>

namespace ngrid::csv {

std::vector<Row> read_file(const std::string& path, bool expect_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::vector<Row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && expect_header) {
            first = false;
            continue;
        }
        first = false;
        Row row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(field);
        rows.push_back(std::move(row));
    }
    return rows;
}

double to_double(const std::string& field, const std::string& context) {
    try {
        size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": expected a number, got '" + field + "'");
    }
}

int to_int(const std::string& field, const std::string& context) {
    try {
        size_t pos = 0;
        int v = std::stoi(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": expected an integer, got '" + field + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

Writer::Writer(const std::string& path, const std::string& header) : path_(path) {
    out_.open(path, std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    out_ << header << '\n';
}

Writer::~Writer() {
    if (out_.is_open()) out_.close();
}

void Writer::sep() {
    if (row_started_) out_ << ',';
    row_started_ = true;
}

void Writer::field(const std::string& v) {
    sep();
    out_ << v;
}

void Writer::field(int v) {
    sep();
    out_ << v;
}

void Writer::field(long long v) {
    sep();
    out_ << v;
}

void Writer::field(double v) {
    sep();
    out_ << format_double(v);
}

void Writer::end_row() {
    out_ << '\n';
    row_started_ = false;
}

void Writer::close() {
    if (out_.is_open()) {
        out_.close();
        if (out_.fail()) throw std::runtime_error("failed to write output file: " + path_);
    }
}

}  // namespace ngrid::csv
