#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vlg::bpe {

using TokenId = int32_t;

constexpr TokenId PAD = 0;
constexpr TokenId BOS = 1;
constexpr TokenId EOS = 2;
constexpr TokenId IMG = 3;
constexpr TokenId IMG_END = 4;
constexpr int kSpecialCount = 5;

/// Byte-pair-merge vocabulary. The base alphabet is the printable ASCII range
/// plus newline; the five special ids are fixed ahead of training and are
/// never reachable from plain text. Merge rules apply in training order.
class Vocabulary {
  public:
    Vocabulary();

    static Vocabulary train(const std::vector<std::string>& corpus, int32_t target_vocab_size);

    std::vector<TokenId> encode(const std::string& text) const;
    std::string decode(const std::vector<TokenId>& ids) const;
    std::string decode_one(TokenId id) const;

    int32_t size() const { return static_cast<int32_t>(symbols_.size()); }
    int32_t merge_count() const { return static_cast<int32_t>(rules_.size()); }
    int32_t base_count() const;

    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

  private:
    std::vector<TokenId> to_base_ids(const std::string& text) const;
    void apply_rule(std::vector<TokenId>& seq, size_t rule_index) const;
    void add_rule(TokenId a, TokenId b);

    // id -> byte string; specials hold their bracketed names.
    std::vector<std::string> symbols_;
    std::vector<std::pair<TokenId, TokenId>> rules_;
    int16_t byte_to_id_[256];
};

} // namespace vlg::bpe
