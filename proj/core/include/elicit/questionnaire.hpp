#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace elicit {

enum class QuestionMode {
    exclusive,                         // exactly one answer is true
    multi_select_with_exclusive_none,  // the none-answer alone, or a non-empty subset of the others
};

std::string_view to_string(QuestionMode mode);
QuestionMode parse_question_mode(std::string_view text);

struct AnswerOption {
    std::string id;
    std::string label;
    std::string question_id;
};

struct Question {
    std::string id;
    std::string label;
    QuestionMode mode = QuestionMode::exclusive;
    std::vector<AnswerOption> answers;
    std::string none_answer_id;  // only meaningful for multi-select questions

    // Number of admissible answer combinations for this question.
    std::size_t combination_count() const;
    std::optional<std::size_t> none_position() const;
};

// Replaces several answers of one question by a single answer whose weight is
// the per-doctor arithmetic mean of the source weights.
struct MergeRule {
    std::vector<std::string> source_answer_ids;
    AnswerOption merged_answer;
};

// Ordered, validated question list. Answers have a flat position: questions
// in order, answers in list order within each question.
class Questionnaire {
public:
    Questionnaire() = default;
    explicit Questionnaire(std::vector<Question> questions, std::vector<MergeRule> merge_rules = {});

    const std::vector<Question>& questions() const { return questions_; }
    const std::vector<MergeRule>& merge_rules() const { return merge_rules_; }

    std::size_t answer_count() const { return answer_ids_.size(); }
    const std::vector<std::string>& answer_ids() const { return answer_ids_; }
    const AnswerOption& answer(std::size_t position) const;

    std::optional<std::size_t> answer_position(std::string_view id) const;
    std::size_t require_answer_position(std::string_view id) const;
    // Index of the question owning the answer at a flat position.
    std::size_t question_of(std::size_t position) const { return question_of_[position]; }
    // Flat position of the first answer of question `q`.
    std::size_t first_position(std::size_t q) const { return first_position_[q]; }

private:
    std::vector<Question> questions_;
    std::vector<MergeRule> merge_rules_;
    std::vector<std::string> answer_ids_;
    std::vector<std::size_t> question_of_;
    std::vector<std::size_t> first_position_;
    std::unordered_map<std::string, std::size_t> position_by_id_;
    std::vector<std::pair<std::size_t, std::size_t>> answer_index_;  // (question, answer)
};

Questionnaire load_questionnaire(std::string_view json_text);
Questionnaire load_questionnaire_file(const std::filesystem::path& path);
// Inverse of load_questionnaire.
std::string questionnaire_to_json(const Questionnaire& q);

// Schema after applying one merge rule: the merged answer takes the slot of
// the first source answer. A none_answer that is merged away is renamed.
Questionnaire merge_questionnaire(const Questionnaire& q, const MergeRule& rule);

inline constexpr double min_weight = -1.0;
inline constexpr double max_weight = 3.0;

// Doctor x answer weight table. Cells may be absent until validated.
class WeightMatrix {
public:
    WeightMatrix() = default;
    WeightMatrix(std::vector<std::string> doctors, std::vector<std::string> answer_ids,
                 std::vector<std::optional<double>> cells);

    const std::vector<std::string>& doctors() const { return doctors_; }
    const std::vector<std::string>& answer_ids() const { return answer_ids_; }

    std::optional<std::size_t> column_of(std::string_view answer_id) const;
    std::optional<double> at(std::size_t doctor, std::size_t column) const {
        return cells_[doctor * answer_ids_.size() + column];
    }
    // Throws if the cell is missing.
    double weight(std::string_view doctor_id, std::string_view answer_id) const;

private:
    std::vector<std::string> doctors_;
    std::vector<std::string> answer_ids_;
    std::vector<std::optional<double>> cells_;  // row-major, doctor x answer
};

// Delimited table: first column doctor id, header row of answer ids; an empty
// cell is a missing weight.
WeightMatrix parse_weight_matrix(std::string_view csv_text);
WeightMatrix load_weight_matrix_file(const std::filesystem::path& path);

// Returns `wm` unchanged when every (doctor, answer) cell of the schema is
// present and within [-1, 3]; throws validation_error otherwise.
const WeightMatrix& validate_weights(const WeightMatrix& wm, const Questionnaire& q);

WeightMatrix apply_merge(const WeightMatrix& wm, const MergeRule& rule, const Questionnaire& q);

// Doctor-averaged weight per answer, at full precision.
class AnswerWeights {
public:
    AnswerWeights() = default;
    AnswerWeights(std::vector<std::string> answer_ids, std::vector<double> means);

    const std::vector<std::string>& answer_ids() const { return answer_ids_; }
    const std::vector<double>& values() const { return means_; }
    std::optional<double> find(std::string_view answer_id) const;
    double at(std::string_view answer_id) const;

    // Means laid out by the questionnaire's flat answer positions.
    std::vector<double> by_position(const Questionnaire& q) const;

private:
    std::vector<std::string> answer_ids_;
    std::vector<double> means_;
    std::unordered_map<std::string, std::size_t> index_;
};

AnswerWeights mean_weights(const WeightMatrix& wm);

}  // namespace elicit
