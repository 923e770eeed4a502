#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace rfa {

using NodeId = std::uint32_t;
using InstanceId = std::uint32_t;

/// Classical type tag carried next to every message.
enum class Tag : std::uint8_t { init = 0, echo = 1, ready1 = 2, ready2 = 3, ic_payload = 4 };

std::string_view tag_name(Tag tag);
std::optional<Tag> parse_tag(std::string_view name);

/// True for the four tags that accompany a quantum direction.
constexpr bool is_direction_tag(Tag tag) { return tag != Tag::ic_payload; }

/// Small bitmask over Tag.
class TagSet {
public:
    constexpr TagSet() = default;
    constexpr TagSet(std::initializer_list<Tag> tags)
    {
        for (Tag t : tags) bits_ |= bit(t);
    }

    constexpr bool contains(Tag t) const { return (bits_ & bit(t)) != 0; }
    constexpr TagSet with(Tag t) const
    {
        TagSet s = *this;
        s.bits_ |= bit(t);
        return s;
    }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }
    constexpr bool operator==(const TagSet&) const = default;

private:
    static constexpr std::uint8_t bit(Tag t) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t)); }
    std::uint8_t bits_ = 0;
};

inline constexpr TagSet kEchoTags{Tag::echo};
inline constexpr TagSet kReadyTags{Tag::ready1, Tag::ready2};

} // namespace rfa
