#include "spacex/sentiment.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "spacex/errors.hpp"
#include "spacex/subprocess.hpp"
#include "spacex/text.hpp"

namespace spacex::sentiment {

std::string to_string(Label label) {
  switch (label) {
    case Label::positive: return "positive";
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
  }
  return "neutral";
}

Label label_from_string(const std::string& s) {
  if (s == "positive") return Label::positive;
  if (s == "negative") return Label::negative;
  if (s == "neutral") return Label::neutral;
  throw SchemaViolation("unknown sentiment label '" + s + "'");
}

std::vector<Label> Classifier::classify_all(const std::vector<std::string>& messages) const {
  std::vector<Label> out;
  out.reserve(messages.size());
  for (const auto& m : messages) out.push_back(classify(m));
  return out;
}

LexiconClassifier::LexiconClassifier(std::vector<std::string> positive_words,
                                     std::vector<std::string> negative_words, std::string model_id)
    : positive_(std::move(positive_words)),
      negative_(std::move(negative_words)),
      model_id_(std::move(model_id)) {
  std::sort(positive_.begin(), positive_.end());
  std::sort(negative_.begin(), negative_.end());
}

std::shared_ptr<const LexiconClassifier> LexiconClassifier::bundled() {
  static const auto instance = std::make_shared<const LexiconClassifier>(
      bundled_positive_words(), bundled_negative_words(), "builtin-lexicon-v1");
  return instance;
}

namespace {

std::vector<std::string> read_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string word = trim(line);
    if (!word.empty()) words.push_back(to_lower_ascii(word));
  }
  return words;
}

}  // namespace

std::shared_ptr<const LexiconClassifier> LexiconClassifier::from_files(
    const std::string& positive_path, const std::string& negative_path) {
  return std::make_shared<const LexiconClassifier>(read_lexicon_file(positive_path),
                                                   read_lexicon_file(negative_path),
                                                   "lexicon-files-v1");
}

int LexiconClassifier::score(const std::string& message) const {
  int score = 0;
  for (const auto& token : word_tokens(message)) {
    if (std::binary_search(positive_.begin(), positive_.end(), token)) ++score;
    if (std::binary_search(negative_.begin(), negative_.end(), token)) --score;
  }
  return score;
}

Label LexiconClassifier::classify(const std::string& message) const {
  const int s = score(message);
  if (s > 0) return Label::positive;
  if (s < 0) return Label::negative;
  return Label::neutral;
}

ExternalClassifier::ExternalClassifier(std::vector<std::string> command, std::string model_id)
    : command_(std::move(command)), model_id_(std::move(model_id)) {
  if (command_.empty()) throw ConfigError("external classifier command is empty");
  if (model_id_.empty()) model_id_ = "external:" + command_.front();
}

std::string ExternalClassifier::escape_message(const std::string& message) {
  std::string out;
  out.reserve(message.size());
  for (char c : message) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Label> ExternalClassifier::classify_batch(
    const std::vector<std::string>& messages) const {
  std::string input;
  for (const auto& m : messages) {
    input += escape_message(m);
    input.push_back('\n');
  }
  const ProcessResult result = run_process(command_, {}, {}, input);
  if (!result.ok())
    throw ConfigError("external classifier '" + command_.front() + "' exited with code " +
                      std::to_string(result.exit_code) + ": " + result.err);
  std::vector<Label> labels;
  for (const auto& line : split(result.out, '\n')) {
    const std::string token = trim(line);
    if (token.empty()) continue;
    labels.push_back(label_from_string(token));
  }
  if (labels.size() != messages.size())
    throw ConfigError("external classifier returned " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(messages.size()) + " messages");
  return labels;
}

Label ExternalClassifier::classify(const std::string& message) const {
  return classify_batch({message}).front();
}

double negative_commit_percentage(const std::vector<Label>& labels) {
  if (labels.empty())
    throw EmptyInput("negative_commit_percentage of zero labels");
  const auto negatives =
      std::count(labels.begin(), labels.end(), Label::negative);
  return 100.0 * static_cast<double>(negatives) / static_cast<double>(labels.size());
}

}  // namespace spacex::sentiment
