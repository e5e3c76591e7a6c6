#pragma once

// CSV emission with deterministic number formatting and the trailing
// "# pass=<n> fail=<m>" summary line every report file carries.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace clks {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    void note_result(bool pass);  // feeds the summary counters
    void comment(const std::string& text);
    void close();  // writes "# pass=<n> fail=<m>" and closes

    long passes() const { return pass_; }
    long fails() const { return fail_; }

  private:
    std::FILE* f_ = nullptr;
    long pass_ = 0, fail_ = 0;
    bool closed_ = false;
};

std::string json_cell(const std::vector<std::pair<std::string, double>>& params);

}  // namespace clks
