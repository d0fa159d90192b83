#include "vlg/bpe.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "vlg/common.hpp"

namespace vlg::bpe {

namespace {
const char* kSpecialNames[kSpecialCount] = {"[PAD]", "[BOS]", "[EOS]", "[IMG]", "[/IMG]"};
const char kHex[] = "0123456789abcdef";

std::string hex_encode(const std::string& bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 0xf]);
    }
    return out;
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string hex_decode(const std::string& hex) {
    VLG_CHECK(hex.size() % 2 == 0, "vocabulary file: odd-length hex string '", hex, "'");
    std::string out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_val(hex[i]), lo = hex_val(hex[i + 1]);
        VLG_CHECK(hi >= 0 && lo >= 0, "vocabulary file: bad hex string '", hex, "'");
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}
} // namespace

Vocabulary::Vocabulary() {
    symbols_.reserve(kSpecialCount + 96);
    for (const char* name : kSpecialNames) symbols_.emplace_back(name);
    for (int i = 0; i < 256; ++i) byte_to_id_[i] = -1;
    // Base alphabet: newline plus the printable ASCII range.
    auto add_base = [&](unsigned char c) {
        byte_to_id_[c] = static_cast<int16_t>(symbols_.size());
        symbols_.emplace_back(1, static_cast<char>(c));
    };
    add_base('\n');
    for (int c = 0x20; c <= 0x7e; ++c) add_base(static_cast<unsigned char>(c));
}

int32_t Vocabulary::base_count() const { return 96; } // '\n' + 0x20..0x7e

std::vector<TokenId> Vocabulary::to_base_ids(const std::string& text) const {
    std::vector<TokenId> out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (byte_to_id_[c] >= 0) {
            out.push_back(byte_to_id_[c]);
        } else {
            // Bytes outside the base alphabet fall back to a printable escape.
            const char esc[4] = {'\\', 'x', kHex[c >> 4], kHex[c & 0xf]};
            for (char e : esc) out.push_back(byte_to_id_[static_cast<unsigned char>(e)]);
        }
    }
    return out;
}

void Vocabulary::apply_rule(std::vector<TokenId>& seq, size_t rule_index) const {
    const auto [a, b] = rules_[rule_index];
    const TokenId merged = static_cast<TokenId>(kSpecialCount + 96 + rule_index);
    size_t w = 0;
    for (size_t r = 0; r < seq.size();) {
        if (r + 1 < seq.size() && seq[r] == a && seq[r + 1] == b) {
            seq[w++] = merged;
            r += 2;
        } else {
            seq[w++] = seq[r++];
        }
    }
    seq.resize(w);
}

void Vocabulary::add_rule(TokenId a, TokenId b) {
    rules_.emplace_back(a, b);
    symbols_.push_back(symbols_[static_cast<size_t>(a)] + symbols_[static_cast<size_t>(b)]);
}

Vocabulary Vocabulary::train(const std::vector<std::string>& corpus, int32_t target_vocab_size) {
    VLG_CHECK(!corpus.empty(), "train_bpe: empty corpus");
    Vocabulary vocab;
    VLG_CHECK(target_vocab_size >= vocab.size(), "train_bpe: target vocab size ",
              target_vocab_size, " below base+specials ", vocab.size());

    std::vector<std::vector<TokenId>> seqs;
    seqs.reserve(corpus.size());
    for (const std::string& s : corpus) seqs.push_back(vocab.to_base_ids(s));

    while (vocab.size() < target_vocab_size) {
        std::map<std::pair<TokenId, TokenId>, int64_t> counts;
        for (const auto& seq : seqs)
            for (size_t i = 0; i + 1 < seq.size(); ++i) counts[{seq[i], seq[i + 1]}] += 1;

        // Most frequent pair; ties broken lexicographically by merged string.
        std::pair<TokenId, TokenId> best{-1, -1};
        int64_t best_count = 1;
        std::string best_str;
        for (const auto& [pair, count] : counts) {
            if (count < 2 || count < best_count) continue;
            std::string merged = vocab.symbols_[static_cast<size_t>(pair.first)] +
                                 vocab.symbols_[static_cast<size_t>(pair.second)];
            if (count > best_count || merged < best_str) {
                best = pair;
                best_count = count;
                best_str = std::move(merged);
            }
        }
        if (best.first < 0) break; // no pair occurs at least twice

        const size_t rule_index = vocab.rules_.size();
        vocab.add_rule(best.first, best.second);
        for (auto& seq : seqs) vocab.apply_rule(seq, rule_index);
    }
    return vocab;
}

std::vector<TokenId> Vocabulary::encode(const std::string& text) const {
    std::vector<TokenId> seq = to_base_ids(text);
    for (size_t r = 0; r < rules_.size(); ++r) apply_rule(seq, r);
    return seq;
}

std::string Vocabulary::decode_one(TokenId id) const {
    VLG_CHECK(id >= 0 && id < size(), "decode: token id ", id, " out of range [0,", size(), ")");
    return symbols_[static_cast<size_t>(id)];
}

std::string Vocabulary::decode(const std::vector<TokenId>& ids) const {
    std::string out;
    for (TokenId id : ids) out += decode_one(id);
    return out;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    VLG_CHECK(f.good(), "cannot write vocabulary file ", path);
    f << "VLBPE1\n";
    for (const auto& [a, b] : rules_)
        f << hex_encode(symbols_[static_cast<size_t>(a)]) << ' '
          << hex_encode(symbols_[static_cast<size_t>(b)]) << '\n';
    VLG_CHECK(f.good(), "failed writing vocabulary file ", path);
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    VLG_CHECK(f.good(), "cannot read vocabulary file ", path);
    std::string line;
    VLG_CHECK(std::getline(f, line) && line == "VLBPE1", "vocabulary file ", path,
              ": bad magic, expected VLBPE1");

    Vocabulary vocab;
    std::map<std::string, TokenId> by_string;
    for (int32_t id = kSpecialCount; id < vocab.size(); ++id)
        by_string[vocab.symbols_[static_cast<size_t>(id)]] = id;

    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string ha, hb;
        VLG_CHECK(static_cast<bool>(ls >> ha >> hb), "vocabulary file ", path, ": bad merge line '",
                  line, "'");
        const std::string sa = hex_decode(ha), sb = hex_decode(hb);
        auto ia = by_string.find(sa), ib = by_string.find(sb);
        VLG_CHECK(ia != by_string.end() && ib != by_string.end(), "vocabulary file ", path,
                  ": merge references unknown symbol in '", line, "'");
        vocab.add_rule(ia->second, ib->second);
        by_string[vocab.symbols_.back()] = vocab.size() - 1;
    }
    return vocab;
}

} // namespace vlg::bpe
