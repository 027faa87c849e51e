#include "elicit/questionnaire.hpp"

#include <algorithm>
#include <json.hpp>
#include <unordered_set>

#include "csv.hpp"
#include "elicit/error.hpp"

namespace elicit {

namespace {

constexpr std::size_t max_multi_select_answers = 20;

using json = nlohmann::json;

std::string required_string(const json& node, const char* key, std::string_view context) {
    auto it = node.find(key);
    if (it == node.end() || !it->is_string()) {
        throw validation_error(std::string(context) + ": missing string field '" + key + "'");
    }
    return it->get<std::string>();
}

std::string optional_string(const json& node, const char* key) {
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) return {};
    if (!it->is_string()) throw validation_error(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

AnswerOption parse_answer(const json& node, std::string_view context) {
    if (!node.is_object()) throw validation_error(std::string(context) + ": answer must be an object");
    AnswerOption a;
    a.id = required_string(node, "id", context);
    a.label = optional_string(node, "label");
    return a;
}

}  // namespace

std::string_view to_string(QuestionMode mode) {
    switch (mode) {
        case QuestionMode::exclusive: return "exclusive";
        case QuestionMode::multi_select_with_exclusive_none: return "multi_select_with_exclusive_none";
    }
    return "exclusive";
}

QuestionMode parse_question_mode(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "exclusive") return QuestionMode::exclusive;
    if (lower == "multi_select_with_exclusive_none" || lower == "multi_select") {
        return QuestionMode::multi_select_with_exclusive_none;
    }
    throw validation_error("unknown question mode '" + std::string(text) + "'");
}

std::optional<std::size_t> Question::none_position() const {
    if (mode != QuestionMode::multi_select_with_exclusive_none) return std::nullopt;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (answers[i].id == none_answer_id) return i;
    }
    return std::nullopt;
}

std::size_t Question::combination_count() const {
    if (mode == QuestionMode::exclusive) return answers.size();
    // none-answer alone, plus every non-empty subset of the remaining answers
    return std::size_t{1} + ((std::size_t{1} << (answers.size() - 1)) - 1);
}

Questionnaire::Questionnaire(std::vector<Question> questions, std::vector<MergeRule> merge_rules)
    : questions_(std::move(questions)), merge_rules_(std::move(merge_rules)) {
    std::unordered_set<std::string> question_ids;
    for (std::size_t qi = 0; qi < questions_.size(); ++qi) {
        Question& q = questions_[qi];
        if (q.id.empty()) throw validation_error("question with empty id");
        if (!question_ids.insert(q.id).second) throw validation_error("duplicate question id '" + q.id + "'");
        if (q.answers.empty()) throw validation_error("question '" + q.id + "' has an empty answer list");

        if (q.mode == QuestionMode::multi_select_with_exclusive_none) {
            if (q.none_answer_id.empty()) {
                throw validation_error("multi-select question '" + q.id + "' has no none_answer_id");
            }
            if (!q.none_position()) {
                throw validation_error("none_answer_id '" + q.none_answer_id + "' is not an answer of '" + q.id + "'");
            }
            if (q.answers.size() - 1 > max_multi_select_answers) {
                throw validation_error("multi-select question '" + q.id + "' has too many answers");
            }
        } else if (!q.none_answer_id.empty()) {
            throw validation_error("exclusive question '" + q.id + "' must not set none_answer_id");
        }

        first_position_.push_back(answer_ids_.size());
        for (std::size_t ai = 0; ai < q.answers.size(); ++ai) {
            AnswerOption& a = q.answers[ai];
            if (a.id.empty()) throw validation_error("answer with empty id in '" + q.id + "'");
            a.question_id = q.id;
            if (!position_by_id_.emplace(a.id, answer_ids_.size()).second) {
                throw validation_error("duplicate answer id '" + a.id + "'");
            }
            answer_ids_.push_back(a.id);
            question_of_.push_back(qi);
            answer_index_.emplace_back(qi, ai);
        }
    }

    for (const MergeRule& rule : merge_rules_) {
        if (rule.source_answer_ids.empty()) throw validation_error("merge rule without source answers");
        if (rule.merged_answer.id.empty()) throw validation_error("merge rule without merged answer id");
        std::optional<std::size_t> owner;
        for (const std::string& id : rule.source_answer_ids) {
            const std::size_t pos = require_answer_position(id);
            if (owner && *owner != question_of_[pos]) {
                throw validation_error("merge rule sources span several questions ('" + id + "')");
            }
            owner = question_of_[pos];
        }
        auto existing = answer_position(rule.merged_answer.id);
        if (existing && std::find(rule.source_answer_ids.begin(), rule.source_answer_ids.end(),
                                  rule.merged_answer.id) == rule.source_answer_ids.end()) {
            throw validation_error("merged answer id '" + rule.merged_answer.id + "' collides with an existing answer");
        }
    }
}

const AnswerOption& Questionnaire::answer(std::size_t position) const {
    const auto [q, a] = answer_index_.at(position);
    return questions_[q].answers[a];
}

std::optional<std::size_t> Questionnaire::answer_position(std::string_view id) const {
    auto it = position_by_id_.find(std::string(id));
    if (it == position_by_id_.end()) return std::nullopt;
    return it->second;
}

std::size_t Questionnaire::require_answer_position(std::string_view id) const {
    auto pos = answer_position(id);
    if (!pos) throw validation_error("unknown answer id '" + std::string(id) + "'");
    return *pos;
}

Questionnaire load_questionnaire(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("questionnaire config is not well-formed: ") + e.what());
    }
    if (!doc.is_object()) throw validation_error("questionnaire config must be an object");
    auto qs = doc.find("questions");
    if (qs == doc.end() || !qs->is_array()) throw validation_error("questionnaire config needs a 'questions' array");

    std::vector<Question> questions;
    for (const json& node : *qs) {
        if (!node.is_object()) throw validation_error("question must be an object");
        Question q;
        q.id = required_string(node, "id", "question");
        q.label = optional_string(node, "label");
        q.mode = parse_question_mode(required_string(node, "mode", q.id));
        q.none_answer_id = optional_string(node, "none_answer_id");
        auto answers = node.find("answers");
        if (answers == node.end() || !answers->is_array()) {
            throw validation_error("question '" + q.id + "' needs an 'answers' array");
        }
        for (const json& a : *answers) q.answers.push_back(parse_answer(a, q.id));
        questions.push_back(std::move(q));
    }

    std::vector<MergeRule> rules;
    if (auto mr = doc.find("merge_rules"); mr != doc.end() && !mr->is_null()) {
        if (!mr->is_array()) throw validation_error("'merge_rules' must be an array");
        for (const json& node : *mr) {
            MergeRule rule;
            auto sources = node.find("sources");
            if (sources == node.end() || !sources->is_array()) {
                throw validation_error("merge rule needs a 'sources' array");
            }
            for (const json& s : *sources) {
                if (!s.is_string()) throw validation_error("merge rule sources must be strings");
                rule.source_answer_ids.push_back(s.get<std::string>());
            }
            auto merged = node.find("merged");
            if (merged == node.end()) throw validation_error("merge rule needs a 'merged' answer");
            rule.merged_answer = parse_answer(*merged, "merge rule");
            rules.push_back(std::move(rule));
        }
    }
    return Questionnaire(std::move(questions), std::move(rules));
}

Questionnaire load_questionnaire_file(const std::filesystem::path& path) {
    return load_questionnaire(detail::read_text_file(path));
}

std::string questionnaire_to_json(const Questionnaire& q) {
    json doc;
    doc["questions"] = json::array();
    for (const Question& question : q.questions()) {
        json node;
        node["id"] = question.id;
        node["label"] = question.label;
        node["mode"] = std::string(to_string(question.mode));
        if (question.mode == QuestionMode::multi_select_with_exclusive_none) node["none_answer_id"] = question.none_answer_id;
        node["answers"] = json::array();
        for (const AnswerOption& a : question.answers) node["answers"].push_back({{"id", a.id}, {"label", a.label}});
        doc["questions"].push_back(std::move(node));
    }
    doc["merge_rules"] = json::array();
    for (const MergeRule& rule : q.merge_rules()) {
        doc["merge_rules"].push_back({{"sources", rule.source_answer_ids},
                                      {"merged", {{"id", rule.merged_answer.id}, {"label", rule.merged_answer.label}}}});
    }
    return doc.dump(2) + "\n";
}

Questionnaire merge_questionnaire(const Questionnaire& q, const MergeRule& rule) {
    const std::size_t first = q.require_answer_position(rule.source_answer_ids.front());
    const std::size_t owner = q.question_of(first);
    std::unordered_set<std::string> sources;
    for (const auto& id : rule.source_answer_ids) {
        if (q.question_of(q.require_answer_position(id)) != owner) {
            throw validation_error("merge rule sources span several questions ('" + id + "')");
        }
        sources.insert(id);
    }

    std::vector<Question> questions = q.questions();
    Question& target = questions[owner];
    std::vector<AnswerOption> answers;
    bool placed = false;
    for (const AnswerOption& a : target.answers) {
        if (!sources.count(a.id)) {
            answers.push_back(a);
        } else if (!placed) {
            AnswerOption merged = rule.merged_answer;
            merged.question_id = target.id;
            answers.push_back(std::move(merged));
            placed = true;
        }
    }
    if (sources.count(target.none_answer_id)) target.none_answer_id = rule.merged_answer.id;
    target.answers = std::move(answers);

    std::vector<MergeRule> remaining;
    for (const MergeRule& r : q.merge_rules()) {
        if (r.source_answer_ids != rule.source_answer_ids || r.merged_answer.id != rule.merged_answer.id) {
            remaining.push_back(r);
        }
    }
    return Questionnaire(std::move(questions), std::move(remaining));
}

WeightMatrix::WeightMatrix(std::vector<std::string> doctors, std::vector<std::string> answer_ids,
                           std::vector<std::optional<double>> cells)
    : doctors_(std::move(doctors)), answer_ids_(std::move(answer_ids)), cells_(std::move(cells)) {
    if (cells_.size() != doctors_.size() * answer_ids_.size()) {
        throw validation_error("weight matrix cell count does not match its shape");
    }
    std::unordered_set<std::string> seen;
    for (const auto& d : doctors_) {
        if (!seen.insert(d).second) throw validation_error("duplicate doctor id '" + d + "'");
    }
    seen.clear();
    for (const auto& a : answer_ids_) {
        if (!seen.insert(a).second) throw validation_error("duplicate answer column '" + a + "'");
    }
}

std::optional<std::size_t> WeightMatrix::column_of(std::string_view answer_id) const {
    for (std::size_t c = 0; c < answer_ids_.size(); ++c) {
        if (answer_ids_[c] == answer_id) return c;
    }
    return std::nullopt;
}

double WeightMatrix::weight(std::string_view doctor_id, std::string_view answer_id) const {
    auto col = column_of(answer_id);
    auto row = std::find(doctors_.begin(), doctors_.end(), doctor_id);
    if (!col || row == doctors_.end()) {
        throw validation_error("no weight cell for (" + std::string(doctor_id) + ", " + std::string(answer_id) + ")");
    }
    auto cell = at(static_cast<std::size_t>(row - doctors_.begin()), *col);
    if (!cell) {
        throw validation_error("missing weight for (" + std::string(doctor_id) + ", " + std::string(answer_id) + ")");
    }
    return *cell;
}

WeightMatrix parse_weight_matrix(std::string_view csv_text) {
    std::vector<std::string_view> lines;
    for (auto line : detail::split_lines(csv_text)) {
        if (!detail::trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw validation_error("weight matrix is empty");

    auto header = detail::split_fields(lines.front());
    if (header.size() < 2) throw validation_error("weight matrix header needs at least one answer column");
    std::vector<std::string> answer_ids(header.begin() + 1, header.end());

    std::vector<std::string> doctors;
    std::vector<std::optional<double>> cells;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto fields = detail::split_fields(lines[r]);
        if (fields.size() != header.size()) {
            throw validation_error("weight matrix row " + std::to_string(r) + " has " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(header.size()));
        }
        doctors.emplace_back(fields.front());
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (fields[c].empty()) {
                cells.emplace_back(std::nullopt);
            } else {
                cells.emplace_back(detail::parse_double(fields[c]));
            }
        }
    }
    return WeightMatrix(std::move(doctors), std::move(answer_ids), std::move(cells));
}

WeightMatrix load_weight_matrix_file(const std::filesystem::path& path) {
    return parse_weight_matrix(detail::read_text_file(path));
}

const WeightMatrix& validate_weights(const WeightMatrix& wm, const Questionnaire& q) {
    if (wm.doctors().empty()) throw validation_error("weight matrix has no doctors");
    for (const std::string& id : q.answer_ids()) {
        auto col = wm.column_of(id);
        if (!col) throw validation_error("weight matrix has no column for answer '" + id + "'");
        for (std::size_t d = 0; d < wm.doctors().size(); ++d) {
            auto cell = wm.at(d, *col);
            if (!cell) {
                throw validation_error("missing weight for doctor '" + wm.doctors()[d] + "', answer '" + id + "'");
            }
            if (!(*cell >= min_weight && *cell <= max_weight)) {
                throw validation_error("weight " + detail::format_double(*cell) + " for doctor '" +
                                       wm.doctors()[d] + "', answer '" + id + "' is outside [-1, 3]");
            }
        }
    }
    return wm;
}

WeightMatrix apply_merge(const WeightMatrix& wm, const MergeRule& rule, const Questionnaire& q) {
    if (rule.source_answer_ids.empty()) throw validation_error("merge rule without source answers");
    std::optional<std::size_t> owner;
    std::vector<std::size_t> source_columns;
    for (const std::string& id : rule.source_answer_ids) {
        const std::size_t pos = q.require_answer_position(id);
        if (owner && *owner != q.question_of(pos)) {
            throw validation_error("merge rule sources span several questions ('" + id + "')");
        }
        owner = q.question_of(pos);
        auto col = wm.column_of(id);
        if (!col) throw validation_error("weight matrix has no column for merge source '" + id + "'");
        source_columns.push_back(*col);
    }
    const std::size_t first_column = *std::min_element(source_columns.begin(), source_columns.end());
    auto is_source = [&](std::size_t c) {
        return std::find(source_columns.begin(), source_columns.end(), c) != source_columns.end();
    };

    std::vector<std::string> answer_ids;
    for (std::size_t c = 0; c < wm.answer_ids().size(); ++c) {
        if (c == first_column) answer_ids.push_back(rule.merged_answer.id);
        else if (!is_source(c)) answer_ids.push_back(wm.answer_ids()[c]);
    }

    std::vector<std::optional<double>> cells;
    cells.reserve(wm.doctors().size() * answer_ids.size());
    for (std::size_t d = 0; d < wm.doctors().size(); ++d) {
        for (std::size_t c = 0; c < wm.answer_ids().size(); ++c) {
            if (c == first_column) {
                double sum = 0.0;
                bool complete = true;
                for (std::size_t sc : source_columns) {
                    auto v = wm.at(d, sc);
                    if (!v) complete = false;
                    else sum += *v;
                }
                cells.push_back(complete ? std::optional<double>(sum / static_cast<double>(source_columns.size()))
                                         : std::nullopt);
            } else if (!is_source(c)) {
                cells.push_back(wm.at(d, c));
            }
        }
    }
    return WeightMatrix(wm.doctors(), std::move(answer_ids), std::move(cells));
}

AnswerWeights::AnswerWeights(std::vector<std::string> answer_ids, std::vector<double> means)
    : answer_ids_(std::move(answer_ids)), means_(std::move(means)) {
    if (answer_ids_.size() != means_.size()) throw validation_error("answer weight vector shape mismatch");
    for (std::size_t i = 0; i < answer_ids_.size(); ++i) {
        if (!index_.emplace(answer_ids_[i], i).second) {
            throw validation_error("duplicate answer id '" + answer_ids_[i] + "' in weight vector");
        }
    }
}

std::optional<double> AnswerWeights::find(std::string_view answer_id) const {
    auto it = index_.find(std::string(answer_id));
    if (it == index_.end()) return std::nullopt;
    return means_[it->second];
}

double AnswerWeights::at(std::string_view answer_id) const {
    auto v = find(answer_id);
    if (!v) throw validation_error("answer '" + std::string(answer_id) + "' has no mean weight");
    return *v;
}

std::vector<double> AnswerWeights::by_position(const Questionnaire& q) const {
    std::vector<double> out;
    out.reserve(q.answer_count());
    for (const auto& id : q.answer_ids()) out.push_back(at(id));
    return out;
}

AnswerWeights mean_weights(const WeightMatrix& wm) {
    if (wm.doctors().empty()) throw validation_error("cannot average weights over an empty doctor list");
    const auto n = static_cast<double>(wm.doctors().size());
    std::vector<double> means;
    for (std::size_t c = 0; c < wm.answer_ids().size(); ++c) {
        double sum = 0.0;
        for (std::size_t d = 0; d < wm.doctors().size(); ++d) {
            auto v = wm.at(d, c);
            if (!v) {
                throw validation_error("missing weight for doctor '" + wm.doctors()[d] + "', answer '" +
                                       wm.answer_ids()[c] + "'");
            }
            sum += *v;
        }
        means.push_back(sum / n);
    }
    return AnswerWeights(wm.answer_ids(), std::move(means));
}

}  // namespace elicit
