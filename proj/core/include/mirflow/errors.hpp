// Error types shared across the pipeline. Every error carries a short
// machine-readable code so the CLI can emit a single parsable line.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirflow {

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class InvalidBase : public PipelineError {
 public:
  InvalidBase(std::size_t position, char base)
      : PipelineError("InvalidBase", "invalid base '" + std::string(1, base) +
                                         "' at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ParseError : public PipelineError {
 public:
  ParseError(std::size_t line_no, const std::string& what)
      : PipelineError("ParseError", "line " + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class ConfigError : public PipelineError {
 public:
  explicit ConfigError(const std::string& what) : PipelineError("ConfigError", what) {}
};

class EmptyLibrary : public PipelineError {
 public:
  explicit EmptyLibrary(const std::string& path)
      : PipelineError("EmptyLibrary", "no usable records in " + path) {}
};

class BadHeader : public PipelineError {
 public:
  explicit BadHeader(const std::string& what) : PipelineError("BadHeader", what) {}
};

class BadPairLine : public PipelineError {
 public:
  BadPairLine(std::size_t line_no, const std::string& what)
      : PipelineError("BadPairLine", "line " + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class UnknownLibrary : public PipelineError {
 public:
  explicit UnknownLibrary(const std::string& id)
      : PipelineError("UnknownLibrary", "library id '" + id + "' is not among the inputs") {}
};

class DuplicateChrom : public PipelineError {
 public:
  explicit DuplicateChrom(const std::string& id)
      : PipelineError("DuplicateChrom", "duplicate chromosome id '" + id + "'") {}
};

class TooShort : public PipelineError {
 public:
  TooShort(std::size_t length, std::size_t minimum)
      : PipelineError("TooShort", "sequence length " + std::to_string(length) +
                                      " below minimum " + std::to_string(minimum)) {}
};

class StageFailure : public PipelineError {
 public:
  StageFailure(const std::string& stage, std::size_t record_index, const std::string& cause)
      : PipelineError("StageFailure", "stage '" + stage + "' failed on record " +
                                          std::to_string(record_index) + ": " + cause),
        stage_(stage), record_index_(record_index), cause_(cause) {}
  const std::string& stage() const { return stage_; }
  std::size_t record_index() const { return record_index_; }
  const std::string& cause() const { return cause_; }

 private:
  std::string stage_;
  std::size_t record_index_;
  std::string cause_;
};

class IoError : public PipelineError {
 public:
  explicit IoError(const std::string& what) : PipelineError("IoError", what) {}
};

class GuideRequired : public PipelineError {
 public:
  GuideRequired()
      : PipelineError("GuideRequired",
                      "differential expression requires >=2 libraries and a guide file") {}
};

class EnrichRequiresDiff : public PipelineError {
 public:
  EnrichRequiresDiff()
      : PipelineError("EnrichRequiresDiff",
                      "pathway enrichment requires differential expression to be enabled") {}
};

class ExhaustedSampling : public PipelineError {
 public:
  explicit ExhaustedSampling(const std::string& what)
      : PipelineError("ExhaustedSampling", what) {}
};

class EmptyTranscriptome : public PipelineError {
 public:
  EmptyTranscriptome() : PipelineError("EmptyTranscriptome", "no transcripts loaded") {}
};

class IndexMismatch : public PipelineError {
 public:
  explicit IndexMismatch(const std::string& what) : PipelineError("IndexMismatch", what) {}
};

}  // namespace mirflow
