#pragma once

#include <memory>
#include <string>
#include <vector>

namespace spacex::sentiment {

enum class Label { positive, negative, neutral };

std::string to_string(Label label);
Label label_from_string(const std::string& s);

/// Deterministic classifier contract: same message, same label, same
/// model_id. model_id is recorded in every downstream dataset.
class Classifier {
public:
  virtual ~Classifier() = default;
  virtual Label classify(const std::string& message) const = 0;
  virtual std::string model_id() const = 0;

  std::vector<Label> classify_all(const std::vector<std::string>& messages) const;
};

/// Word-list classifier: score = positive hits - negative hits over
/// lowercased whole-word tokens; >0 positive, <0 negative, =0 neutral.
/// Negation is not modeled (known bias, recorded in outputs).
class LexiconClassifier : public Classifier {
public:
  LexiconClassifier(std::vector<std::string> positive_words,
                    std::vector<std::string> negative_words, std::string model_id);

  /// The word lists bundled with the toolkit.
  static std::shared_ptr<const LexiconClassifier> bundled();

  /// Loads two lexicon files: UTF-8, one lowercase word per line,
  /// '#' starts a comment.
  static std::shared_ptr<const LexiconClassifier> from_files(const std::string& positive_path,
                                                             const std::string& negative_path);

  Label classify(const std::string& message) const override;
  std::string model_id() const override { return model_id_; }

  int score(const std::string& message) const;

private:
  std::vector<std::string> positive_;
  std::vector<std::string> negative_;
  std::string model_id_;
};

/// Adapter for an external classifier executable: one message per line in
/// (embedded newlines escaped as \n, backslashes as \\), one of
/// positive|negative|neutral per line out, order-preserving.
class ExternalClassifier : public Classifier {
public:
  explicit ExternalClassifier(std::vector<std::string> command, std::string model_id = {});

  Label classify(const std::string& message) const override;
  std::string model_id() const override { return model_id_; }

  std::vector<Label> classify_batch(const std::vector<std::string>& messages) const;

  static std::string escape_message(const std::string& message);

private:
  std::vector<std::string> command_;
  std::string model_id_;
};

/// 100 * (#negative / total). Throws EmptyInput for an empty list.
double negative_commit_percentage(const std::vector<Label>& labels);

/// Bundled word lists (exposed for provenance output and tests).
const std::vector<std::string>& bundled_positive_words();
const std::vector<std::string>& bundled_negative_words();

}  // namespace spacex::sentiment
