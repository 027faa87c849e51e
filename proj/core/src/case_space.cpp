#include "elicit/case_space.hpp"

#include <algorithm>
#include <cmath>

#include "elicit/error.hpp"

namespace elicit {

namespace {

// Non-none answer positions (relative to the question) in list order.
std::vector<std::size_t> subset_positions(const Question& question) {
    std::vector<std::size_t> out;
    const auto none = question.none_position();
    for (std::size_t a = 0; a < question.answers.size(); ++a) {
        if (!none || a != *none) out.push_back(a);
    }
    return out;
}

// Digit of question `qi` in the mixed-radix canonical index.
std::size_t question_digit(const CaseVector& c, const Questionnaire& q, std::size_t qi) {
    const Question& question = q.questions()[qi];
    const std::size_t base = q.first_position(qi);
    if (question.mode == QuestionMode::exclusive) {
        std::size_t chosen = question.answers.size();
        for (std::size_t a = 0; a < question.answers.size(); ++a) {
            if (c.assignment[base + a]) {
                if (chosen != question.answers.size()) {
                    throw validation_error("question '" + question.id + "' is exclusive but several answers are true");
                }
                chosen = a;
            }
        }
        if (chosen == question.answers.size()) {
            throw validation_error("question '" + question.id + "' is exclusive but no answer is true");
        }
        return chosen;
    }

    const std::size_t none = *question.none_position();
    const bool none_set = c.assignment[base + none] != 0;
    std::size_t mask = 0;
    const auto others = subset_positions(question);
    for (std::size_t bit = 0; bit < others.size(); ++bit) {
        if (c.assignment[base + others[bit]]) mask |= std::size_t{1} << bit;
    }
    if (none_set && mask != 0) {
        throw validation_error("question '" + question.id + "': '" + question.none_answer_id +
                               "' cannot be combined with other answers");
    }
    if (!none_set && mask == 0) {
        throw validation_error("question '" + question.id + "' has no true answer");
    }
    return mask;  // 0 is the none-answer combination
}

void check_shape(const CaseVector& c, const Questionnaire& q) {
    if (c.assignment.size() != q.answer_count()) {
        throw validation_error("case has " + std::to_string(c.assignment.size()) + " answer slots, schema has " +
                               std::to_string(q.answer_count()));
    }
    for (auto v : c.assignment) {
        if (v > 1) throw validation_error("case assignment values must be 0 or 1");
    }
}

}  // namespace

std::size_t case_count(const Questionnaire& q) {
    std::size_t total = 1;
    for (const Question& question : q.questions()) {
        const std::size_t k = question.combination_count();
        if (k == 0 || total > max_case_count / k) {
            throw validation_error("case space exceeds " + std::to_string(max_case_count) + " cases");
        }
        total *= k;
    }
    return total;
}

CaseSet enumerate_cases(const Questionnaire& q) {
    const std::size_t n = case_count(q);
    CaseSet cases;
    cases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cases.push_back(case_at(i, q));
    return cases;
}

void validate_case(const CaseVector& c, const Questionnaire& q) {
    check_shape(c, q);
    for (std::size_t qi = 0; qi < q.questions().size(); ++qi) question_digit(c, q, qi);
}

std::size_t canonical_index(const CaseVector& c, const Questionnaire& q) {
    check_shape(c, q);
    std::size_t index = 0;
    for (std::size_t qi = 0; qi < q.questions().size(); ++qi) {
        index = index * q.questions()[qi].combination_count() + question_digit(c, q, qi);
    }
    return index;
}

CaseVector case_at(std::size_t index, const Questionnaire& q) {
    const std::size_t n = case_count(q);
    if (index >= n) {
        throw validation_error("case index " + std::to_string(index) + " out of range [0, " + std::to_string(n) + ")");
    }
    CaseVector c;
    c.assignment.assign(q.answer_count(), 0);
    for (std::size_t qi = q.questions().size(); qi-- > 0;) {
        const Question& question = q.questions()[qi];
        const std::size_t k = question.combination_count();
        const std::size_t digit = index % k;
        index /= k;
        const std::size_t base = q.first_position(qi);
        if (question.mode == QuestionMode::exclusive) {
            c.assignment[base + digit] = 1;
        } else if (digit == 0) {
            c.assignment[base + *question.none_position()] = 1;
        } else {
            const auto others = subset_positions(question);
            for (std::size_t bit = 0; bit < others.size(); ++bit) {
                if (digit & (std::size_t{1} << bit)) c.assignment[base + others[bit]] = 1;
            }
        }
    }
    return c;
}

CaseVector case_from_answers(const Questionnaire& q, std::span<const std::string> true_answer_ids) {
    CaseVector c;
    c.assignment.assign(q.answer_count(), 0);
    for (const std::string& id : true_answer_ids) {
        const std::size_t pos = q.require_answer_position(id);
        if (c.assignment[pos]) throw validation_error("answer '" + id + "' listed twice");
        c.assignment[pos] = 1;
    }
    return c;
}

std::vector<std::string> true_answers(const CaseVector& c, const Questionnaire& q) {
    check_shape(c, q);
    std::vector<std::string> ids;
    for (std::size_t pos = 0; pos < c.assignment.size(); ++pos) {
        if (c.assignment[pos]) ids.push_back(q.answer_ids()[pos]);
    }
    return ids;
}

double weight_sum(const CaseVector& c, std::span<const double> weights_by_position) {
    if (c.assignment.size() != weights_by_position.size()) {
        throw validation_error("case and weight vector have different answer counts");
    }
    double sum = 0.0;
    for (std::size_t pos = 0; pos < c.assignment.size(); ++pos) {
        if (c.assignment[pos]) sum += weights_by_position[pos];
    }
    return sum;
}

double weight_sum(const CaseVector& c, const Questionnaire& q, const AnswerWeights& weights) {
    check_shape(c, q);
    double sum = 0.0;
    for (std::size_t pos = 0; pos < c.assignment.size(); ++pos) {
        if (c.assignment[pos]) sum += weights.at(q.answer_ids()[pos]);
    }
    return sum;
}

NormalizedValue NormalizationBounds::normalize(double raw) const {
    const double v = (raw - min) / (max - min);
    if (v < 0.0) return {0.0, true};
    if (v > 1.0) return {1.0, true};
    return {v, false};
}

WeightSumTable normalize_sums(std::span<const double> sums) {
    if (sums.empty()) throw validation_error("cannot normalize an empty list of sums");
    for (double s : sums) {
        if (!std::isfinite(s)) throw validation_error("weight sums must be finite");
    }
    const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
    if (!(*hi > *lo)) {
        throw validation_error("degenerate normalization range: all weight sums equal " + std::to_string(*lo));
    }
    WeightSumTable table;
    table.bounds = {*lo, *hi};
    table.raw.assign(sums.begin(), sums.end());
    table.normalized.reserve(sums.size());
    for (double s : sums) table.normalized.push_back(table.bounds.normalize(s).value);
    return table;
}

}  // namespace elicit
