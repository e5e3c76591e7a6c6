#include "clks/csv.hpp"

#include <cstring>

namespace clks {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) {
    f_ = std::fopen(path.c_str(), "wb");
    if (!f_) throw IoError("cannot open for writing: " + path);
    row(header);
}

CsvWriter::~CsvWriter() {
    if (!closed_) close();
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& c = cells[i];
        bool quote = c.find_first_of(",\"\n") != std::string::npos;
        if (quote) {
            std::fputc('"', f_);
            for (char ch : c) {
                if (ch == '"') std::fputc('"', f_);
                std::fputc(ch, f_);
            }
            std::fputc('"', f_);
        } else {
            std::fwrite(c.data(), 1, c.size(), f_);
        }
        std::fputc(i + 1 == cells.size() ? '\n' : ',', f_);
    }
}

void CsvWriter::note_result(bool pass) { (pass ? pass_ : fail_) += 1; }

void CsvWriter::comment(const std::string& text) {
    std::fprintf(f_, "# %s\n", text.c_str());
}

void CsvWriter::close() {
    if (closed_) return;
    std::fprintf(f_, "# pass=%ld fail=%ld\n", pass_, fail_);
    std::fclose(f_);
    closed_ = true;
}

std::string json_cell(const std::vector<std::pair<std::string, double>>& params) {
    std::string s = "{";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) s += ",";
        s += "\"" + params[i].first + "\":" + format_double(params[i].second);
    }
    s += "}";
    return s;
}

}  // namespace clks
