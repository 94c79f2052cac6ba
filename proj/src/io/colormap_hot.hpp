// SPDX-License-Identifier: Apache-2.0
// Black-red-yellow-white ramp: r = 8x/3, g = 8x/3 - 1, b = 4x - 3, clipped
// to [0, 1] and rounded to 8 bits.
#pragma once

#include <array>
#include <cstdint>

namespace selo::detail {

inline constexpr std::array<std::array<std::uint8_t, 3>, 256> kHotColormap{{
    {0, 0, 0}, {3, 0, 0}, {5, 0, 0}, {8, 0, 0},
    {11, 0, 0}, {13, 0, 0}, {16, 0, 0}, {19, 0, 0},
    {21, 0, 0}, {24, 0, 0}, {27, 0, 0}, {29, 0, 0},
    {32, 0, 0}, {35, 0, 0}, {37, 0, 0}, {40, 0, 0},
    {43, 0, 0}, {45, 0, 0}, {48, 0, 0}, {51, 0, 0},
    {53, 0, 0}, {56, 0, 0}, {59, 0, 0}, {61, 0, 0},
    {64, 0, 0}, {67, 0, 0}, {69, 0, 0}, {72, 0, 0},
    {75, 0, 0}, {77, 0, 0}, {80, 0, 0}, {83, 0, 0},
    {85, 0, 0}, {88, 0, 0}, {91, 0, 0}, {93, 0, 0},
    {96, 0, 0}, {99, 0, 0}, {101, 0, 0}, {104, 0, 0},
    {107, 0, 0}, {109, 0, 0}, {112, 0, 0}, {115, 0, 0},
    {117, 0, 0}, {120, 0, 0}, {123, 0, 0}, {125, 0, 0},
    {128, 0, 0}, {131, 0, 0}, {133, 0, 0}, {136, 0, 0},
    {139, 0, 0}, {141, 0, 0}, {144, 0, 0}, {147, 0, 0},
    {149, 0, 0}, {152, 0, 0}, {155, 0, 0}, {157, 0, 0},
    {160, 0, 0}, {163, 0, 0}, {165, 0, 0}, {168, 0, 0},
    {171, 0, 0}, {173, 0, 0}, {176, 0, 0}, {179, 0, 0},
    {181, 0, 0}, {184, 0, 0}, {187, 0, 0}, {189, 0, 0},
    {192, 0, 0}, {195, 0, 0}, {197, 0, 0}, {200, 0, 0},
    {203, 0, 0}, {205, 0, 0}, {208, 0, 0}, {211, 0, 0},
    {213, 0, 0}, {216, 0, 0}, {219, 0, 0}, {221, 0, 0},
    {224, 0, 0}, {227, 0, 0}, {229, 0, 0}, {232, 0, 0},
    {235, 0, 0}, {237, 0, 0}, {240, 0, 0}, {243, 0, 0},
    {245, 0, 0}, {248, 0, 0}, {251, 0, 0}, {253, 0, 0},
    {255, 1, 0}, {255, 4, 0}, {255, 6, 0}, {255, 9, 0},
    {255, 12, 0}, {255, 14, 0}, {255, 17, 0}, {255, 20, 0},
    {255, 22, 0}, {255, 25, 0}, {255, 28, 0}, {255, 30, 0},
    {255, 33, 0}, {255, 36, 0}, {255, 38, 0}, {255, 41, 0},
    {255, 44, 0}, {255, 46, 0}, {255, 49, 0}, {255, 52, 0},
    {255, 54, 0}, {255, 57, 0}, {255, 60, 0}, {255, 62, 0},
    {255, 65, 0}, {255, 68, 0}, {255, 70, 0}, {255, 73, 0},
    {255, 76, 0}, {255, 78, 0}, {255, 81, 0}, {255, 84, 0},
    {255, 86, 0}, {255, 89, 0}, {255, 92, 0}, {255, 94, 0},
    {255, 97, 0}, {255, 100, 0}, {255, 102, 0}, {255, 105, 0},
    {255, 108, 0}, {255, 110, 0}, {255, 113, 0}, {255, 116, 0},
    {255, 118, 0}, {255, 121, 0}, {255, 124, 0}, {255, 126, 0},
    {255, 129, 0}, {255, 132, 0}, {255, 134, 0}, {255, 137, 0},
    {255, 140, 0}, {255, 142, 0}, {255, 145, 0}, {255, 148, 0},
    {255, 150, 0}, {255, 153, 0}, {255, 156, 0}, {255, 158, 0},
    {255, 161, 0}, {255, 164, 0}, {255, 166, 0}, {255, 169, 0},
    {255, 172, 0}, {255, 174, 0}, {255, 177, 0}, {255, 180, 0},
    {255, 182, 0}, {255, 185, 0}, {255, 188, 0}, {255, 190, 0},
    {255, 193, 0}, {255, 196, 0}, {255, 198, 0}, {255, 201, 0},
    {255, 204, 0}, {255, 206, 0}, {255, 209, 0}, {255, 212, 0},
    {255, 214, 0}, {255, 217, 0}, {255, 220, 0}, {255, 222, 0},
    {255, 225, 0}, {255, 228, 0}, {255, 230, 0}, {255, 233, 0},
    {255, 236, 0}, {255, 238, 0}, {255, 241, 0}, {255, 244, 0},
    {255, 246, 0}, {255, 249, 0}, {255, 252, 0}, {255, 254, 0},
    {255, 255, 3}, {255, 255, 7}, {255, 255, 11}, {255, 255, 15},
    {255, 255, 19}, {255, 255, 23}, {255, 255, 27}, {255, 255, 31},
    {255, 255, 35}, {255, 255, 39}, {255, 255, 43}, {255, 255, 47},
    {255, 255, 51}, {255, 255, 55}, {255, 255, 59}, {255, 255, 63},
    {255, 255, 67}, {255, 255, 71}, {255, 255, 75}, {255, 255, 79},
    {255, 255, 83}, {255, 255, 87}, {255, 255, 91}, {255, 255, 95},
    {255, 255, 99}, {255, 255, 103}, {255, 255, 107}, {255, 255, 111},
    {255, 255, 115}, {255, 255, 119}, {255, 255, 123}, {255, 255, 127},
    {255, 255, 131}, {255, 255, 135}, {255, 255, 139}, {255, 255, 143},
    {255, 255, 147}, {255, 255, 151}, {255, 255, 155}, {255, 255, 159},
    {255, 255, 163}, {255, 255, 167}, {255, 255, 171}, {255, 255, 175},
    {255, 255, 179}, {255, 255, 183}, {255, 255, 187}, {255, 255, 191},
    {255, 255, 195}, {255, 255, 199}, {255, 255, 203}, {255, 255, 207},
    {255, 255, 211}, {255, 255, 215}, {255, 255, 219}, {255, 255, 223},
    {255, 255, 227}, {255, 255, 231}, {255, 255, 235}, {255, 255, 239},
    {255, 255, 243}, {255, 255, 247}, {255, 255, 251}, {255, 255, 255},
}};

}  // namespace selo::detail
