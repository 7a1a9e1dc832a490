#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngrid::csv {

/// One parsed row; numeric fields are converted by the caller.
using Row = std::vector<std::string>;

/// Reads a comma-separated file. When `expect_header` is true the first line
/// is dropped. Empty lines are skipped. Throws std::runtime_error on I/O
/// failure.
std::vector<Row> read_file(const std::string& path, bool expect_header = true);

double to_double(const std::string& field, const std::string& context);
int to_int(const std::string& field, const std::string& context);

/// Buffered CSV writer with fixed numeric formatting so that identical data
/// yields byte-identical files.
class Writer {
public:
    Writer(const std::string& path, const std::string& header);
    ~Writer();

    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void field(const std::string& v);
    void field(int v);
    void field(long long v);
    void field(double v);
    void end_row();

    void close();
    const std::string& path() const { return path_; }

private:
    void sep();
    std::ofstream out_;
    std::string path_;
    bool row_started_ = false;
};

/// Formats a double the way Writer does ("%.10g").
std::string format_double(double v);

}  // namespace ngrid::csv
