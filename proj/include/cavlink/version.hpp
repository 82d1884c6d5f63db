#pragma once

#define CAVLINK_VERSION "0.1.0"
