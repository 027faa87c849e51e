#include "elicit/score_table.hpp"

#include <array>

#include "csv.hpp"
#include "elicit/error.hpp"

namespace elicit {

namespace {

constexpr std::array<std::string_view, 6> trailing_columns{"raw_sum",   "normalized_sum", "p_gmm_cdf",
                                                           "p_kde_cdf", "p_posterior",    "category"};

}  // namespace

Approach parse_approach(int number) {
    if (number < 1 || number > 3) throw validation_error("approach must be 1, 2 or 3");
    return static_cast<Approach>(number);
}

double ApproachScores::get(Approach a) const {
    switch (a) {
        case Approach::gmm_cdf: return gmm_cdf;
        case Approach::kde_cdf: return kde_cdf;
        case Approach::posterior: return posterior;
    }
    return gmm_cdf;
}

std::string scores_to_csv(const ScoreTable& table) {
    std::string out = "case_id";
    for (const auto& id : table.answer_ids) out += "," + id;
    for (auto col : trailing_columns) {
        out += ',';
        out += col;
    }
    out += '\n';
    for (const ScoreRow& row : table.rows) {
        if (row.assignment.size() != table.answer_ids.size()) {
            throw validation_error("score row " + std::to_string(row.case_id) + " has the wrong answer count");
        }
        out += std::to_string(row.case_id);
        for (auto bit : row.assignment) out += bit ? ",1" : ",0";
        for (double v : {row.raw_sum, row.normalized_sum, row.scores.gmm_cdf, row.scores.kde_cdf,
                         row.scores.posterior}) {
            out += ',';
            out += detail::format_double(v);
        }
        out += ',';
        out += to_string(row.category);
        out += '\n';
    }
    return out;
}

ScoreTable scores_from_csv(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty()) throw validation_error("scores CSV is empty");
    const auto header = detail::split_fields(lines.front());
    if (header.size() < 1 + trailing_columns.size() || header.front() != "case_id") {
        throw validation_error("scores CSV header is malformed");
    }
    const std::size_t answers = header.size() - 1 - trailing_columns.size();
    for (std::size_t i = 0; i < trailing_columns.size(); ++i) {
        if (header[1 + answers + i] != trailing_columns[i]) {
            throw validation_error("scores CSV header: expected column '" + std::string(trailing_columns[i]) + "'");
        }
    }

    ScoreTable table;
    for (std::size_t i = 0; i < answers; ++i) table.answer_ids.emplace_back(header[1 + i]);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (detail::trim(lines[r]).empty()) continue;
        const auto f = detail::split_fields(lines[r]);
        if (f.size() != header.size()) {
            throw validation_error("scores CSV line " + std::to_string(r + 1) + " has the wrong field count");
        }
        ScoreRow row;
        const long long id = detail::parse_integer(f[0]);
        if (id < 0) throw validation_error("negative case id");
        row.case_id = static_cast<std::size_t>(id);
        for (std::size_t i = 0; i < answers; ++i) {
            if (f[1 + i] != "0" && f[1 + i] != "1") throw validation_error("answer cells must be 0 or 1");
            row.assignment.push_back(f[1 + i] == "1" ? 1 : 0);
        }
        std::size_t c = 1 + answers;
        row.raw_sum = detail::parse_double(f[c++]);
        row.normalized_sum = detail::parse_double(f[c++]);
        row.scores.gmm_cdf = detail::parse_double(f[c++]);
        row.scores.kde_cdf = detail::parse_double(f[c++]);
        row.scores.posterior = detail::parse_double(f[c++]);
        row.category = parse_category(f[c]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

void export_scores_csv(const ScoreTable& table, const std::filesystem::path& path) {
    detail::write_text_file(path, scores_to_csv(table));
}

ScoreTable load_scores_csv(const std::filesystem::path& path) {
    return scores_from_csv(detail::read_text_file(path));
}

}  // namespace elicit
