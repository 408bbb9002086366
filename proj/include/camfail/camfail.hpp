// Copyright 2026 The camfail Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "camfail/array_api.hpp"
#include "camfail/campaign.hpp"
#include "camfail/error.hpp"
#include "camfail/evaluation.hpp"
#include "camfail/family.hpp"
#include "camfail/image.hpp"
#include "camfail/kitti.hpp"
#include "camfail/overlay.hpp"
#include "camfail/png_io.hpp"
#include "camfail/presets.hpp"
#include "camfail/random.hpp"
#include "camfail/taxonomy.hpp"
#include "camfail/transforms.hpp"
