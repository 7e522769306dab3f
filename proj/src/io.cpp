#include "sscor/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace sscor {

namespace {

// Splits on commas; within comma-free segments, runs of whitespace also
// separate fields. Fields are trimmed.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    auto push = [&](std::string_view raw) {
        std::size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) {
            fields.push_back(raw.substr(0, 0));
            return;
        }
        std::size_t e = raw.find_last_not_of(" \t\r");
        std::string_view t = raw.substr(b, e - b + 1);
        // No comma present in t; break further on internal whitespace.
        std::size_t pos = 0;
        while (pos < t.size()) {
            std::size_t ws = t.find_first_of(" \t", pos);
            if (ws == std::string_view::npos) {
                fields.push_back(t.substr(pos));
                return;
            }
            fields.push_back(t.substr(pos, ws - pos));
            pos = t.find_first_not_of(" \t", ws);
            if (pos == std::string_view::npos) return;
        }
    };
    bool has_comma = line.find(',') != std::string_view::npos;
    if (!has_comma) {
        push(line);
        return fields;
    }
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            push(line.substr(start));
            break;
        }
        push(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

SampleMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open file: " + path);

    std::vector<double> values;
    std::size_t line_no = 0;
    std::size_t col_x = 0, col_y = 0;
    bool columns_chosen = false;
    bool header_skipped = false;
    std::size_t rows = 0;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        std::size_t b = sv.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;  // blank
        if (sv[b] == '#') continue;                 // comment

        auto fields = split_fields(sv);
        if (!columns_chosen) {
            // Pick the first two fields that parse as numbers. If this row
            // has fewer than two, treat it as a header and move on -- but
            // only once: a second non-numeric row is an error.
            std::vector<std::size_t> numeric;
            double v;
            for (std::size_t j = 0; j < fields.size() && numeric.size() < 2; ++j)
                if (parse_double(fields[j], v)) numeric.push_back(j);
            if (numeric.size() < 2) {
                if (!header_skipped) {
                    header_skipped = true;  // a single leading header row is fine
                    continue;
                }
                throw CsvError("need at least two numeric columns", line_no);
            }
            col_x = numeric[0];
            col_y = numeric[1];
            columns_chosen = true;
        }
        if (fields.size() <= col_y)
            throw CsvError("row has too few columns", line_no);
        double x, y;
        if (!parse_double(fields[col_x], x))
            throw CsvError("cannot parse column " + std::to_string(col_x + 1) + " as a number",
                           line_no);
        if (!parse_double(fields[col_y], y))
            throw CsvError("cannot parse column " + std::to_string(col_y + 1) + " as a number",
                           line_no);
        values.push_back(x);
        values.push_back(y);
        ++rows;
    }
    if (rows < 2) throw CsvError("need at least two data rows", line_no);
    return SampleMatrix(rows, 2, std::move(values));
}

}  // namespace sscor
