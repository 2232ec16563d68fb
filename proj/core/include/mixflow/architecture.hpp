#pragma once

#include "mixflow/rational.hpp"

#include <string>
#include <vector>

namespace mixflow {

// Fluid quantity in the unit declared by the architecture. Non-negative.
class Volume {
public:
    Volume() = default;
    explicit Volume(Rational amount) : amount_(std::move(amount)) {
        if (amount_.is_negative()) throw std::domain_error("negative volume");
    }
    Volume(std::int64_t amount) : Volume(Rational(amount)) {}

    const Rational& amount() const { return amount_; }
    bool is_zero() const { return amount_.is_zero(); }

    // Dispensable volumes are integer multiples of the hardware transport
    // resolution; anything else cannot be metered on the chip.
    bool is_dispensable(const Volume& htr) const {
        return amount_.is_multiple_of(htr.amount());
    }

    Volume operator+(const Volume& rhs) const { return Volume(amount_ + rhs.amount_); }
    Volume operator-(const Volume& rhs) const { return Volume(amount_ - rhs.amount_); }
    Volume scaled(const Rational& f) const { return Volume(amount_ * f); }

    bool operator==(const Volume& rhs) const { return amount_ == rhs.amount_; }
    auto operator<=>(const Volume& rhs) const { return amount_ <=> rhs.amount_; }

    std::string str() const { return amount_.str(); }

private:
    Rational amount_;
};

enum class MixerTechnology {
    Fixed1to1,      // two equal chambers, output is the average of the inputs
    ArbitraryRatio, // partially air-filled mixer, any HTR-multiple split
};

std::string to_string(MixerTechnology tech);
MixerTechnology mixer_technology_from_string(const std::string& s);

// One class of functional fluidic unit (mixer, detector, input, ...).
struct FfuClass {
    std::string name;
    Volume mhc;             // maximum hardware capacity per operation
    Volume mvr;             // minimum volume requirement (0 for inputs/outputs)
    int chamber_count = 1;  // 2 for 1:1 mixers
};

struct ArchitectureSpec {
    std::string unit = "nl";
    Volume htr;
    std::vector<FfuClass> ffu_classes;
    MixerTechnology mixer_technology = MixerTechnology::ArbitraryRatio;

    const FfuClass* find_class(const std::string& name) const;
    const FfuClass& require_class(const std::string& name) const;

    // Volume of one mixer chamber (MHC/2) for the named 1:1 mixer class.
    Volume chamber_volume(const FfuClass& cls) const;
};

} // namespace mixflow
