#pragma once

// Comment-marker mutation grammar.
//
// A variation is written inline in ordinary source:
//
//   <begin><marker> <end>              opener
//   ...base implementation...
//   <begin><marker><marker> NAME <end> mutant header
//   <begin><marker> ...body... <end>   mutant body (inactive)
//   <begin> <marker><end>              closer
//
// Any alternative (base or mutant) may be active (plain code) or commented
// (wrapped in <begin><marker> ... <end>). Exactly one alternative per
// variation is active. Styles whose `end` is "\n" are line-comment styles:
// tokens then occupy whole lines and commented code carries the
// <begin><marker> prefix on every non-blank line.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbtbench::mutation {

struct CommentStyle {
  std::string begin;
  std::string end;
  std::string marker = "!";

  bool line_mode() const noexcept { return end == "\n"; }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  static CommentStyle haskell() { return {"{-", "-}", "!"}; }
  static CommentStyle ocaml() { return {"(*", "*)", "!"}; }
  static CommentStyle c_block() { return {"/*", "*/", "!"}; }
  static CommentStyle c_line() { return {"//", "\n", "!"}; }
  static CommentStyle haskell_line() { return {"--", "\n", "!"}; }
};

/// Default style registry keyed by file extension (with the leading dot).
std::map<std::string, CommentStyle> default_styles();

/// One alternative inside a variation as it appears in the file.
struct Alternative {
  std::string segment;  // verbatim bytes between the surrounding tokens
  std::string code;     // the code with comment wrapping removed, trimmed
  bool commented = false;
};

struct Mutant {
  std::string name;
  std::string header;  // verbatim header token
  std::size_t header_offset = 0;
  Alternative body;
};

struct Variation {
  std::size_t begin_offset = 0;  // offset of the opener
  std::size_t end_offset = 0;    // one past the closer
  std::string opener;
  std::string closer;
  Alternative base;
  std::vector<Mutant> mutants;

  /// nullopt when the base is active.
  std::optional<std::string> active_mutant() const;
  const Mutant* find(std::string_view name) const noexcept;
};

struct ParsedSource {
  std::string original;
  CommentStyle style;
  std::vector<std::string> inert;  // inert.size() == variations.size() + 1
  std::vector<Variation> variations;
};

enum class ErrorKind {
  UnterminatedVariation,
  MutantBodyMissing,
  NestedVariation,
  DuplicateMutantName,
  InvalidHeader,
  UnexpectedMarker,
  EmptyVariation,
  ActivationConflict,
  UnknownMutant,
  AmbiguousMutant,
};

std::string_view to_string(ErrorKind kind) noexcept;

class MutationError : public std::runtime_error {
 public:
  MutationError(ErrorKind kind, std::size_t offset, std::size_t line, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t offset_;
  std::size_t line_;
};

ParsedSource parse_variations(std::string_view source, const CommentStyle& style);

/// Variation index -> selected alternative (nullopt selects the base).
/// Variations absent from the map are emitted as found.
using Selection = std::map<std::size_t, std::optional<std::string>>;

Selection all_base(const ParsedSource& parsed);
Selection as_found(const ParsedSource& parsed);

std::string render(const ParsedSource& parsed, const Selection& selection);

/// Wraps active code in comment markers, and the inverse. Round-trips exactly
/// for segments in canonical layout.
std::string comment_segment(std::string_view segment, const CommentStyle& style);
std::string uncomment_segment(std::string_view segment, const CommentStyle& style);

/// True when every commented alternative survives uncomment -> comment byte-exactly,
/// which is what makes toggling an involution.
bool is_canonical(const ParsedSource& parsed);

struct MutantRef {
  std::filesystem::path file;  // relative to the enumeration root
  std::size_t variation = 0;
  std::string name;
};

/// Walks `root` recursively; files whose extension has a style are parsed.
/// Ordered by relative path, then by position in the file. Parse errors are
/// rethrown with the file path prepended to the message.
std::vector<MutantRef> enumerate_mutants(const std::filesystem::path& root,
                                         const std::map<std::string, CommentStyle>& styles);

bool is_identifier(std::string_view s) noexcept;

}  // namespace pbtbench::mutation
