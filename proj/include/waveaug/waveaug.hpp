/* Copyright 2026 The WaveAugment Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WAVEAUG_WAVEAUG_HPP_
#define WAVEAUG_WAVEAUG_HPP_

#include "waveaug/augment.hpp"
#include "waveaug/config.hpp"
#include "waveaug/dsp.hpp"
#include "waveaug/error.hpp"
#include "waveaug/fft.hpp"
#include "waveaug/filters.hpp"
#include "waveaug/rng.hpp"
#include "waveaug/room.hpp"
#include "waveaug/signal.hpp"
#include "waveaug/spectrogram.hpp"
#include "waveaug/theory.hpp"
#include "waveaug/vicinal.hpp"
#include "waveaug/wav.hpp"

namespace waveaug {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace waveaug

#endif  // WAVEAUG_WAVEAUG_HPP_
