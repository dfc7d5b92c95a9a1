"""Values produced once by tests/oracles.py and frozen here."""

PARTITIONS_60 = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627, 792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604, 6842, 8349, 10143, 12310, 14883, 17977, 21637, 26015, 31185, 37338, 44583, 53174, 63261, 75175, 89134, 105558, 124754, 147273, 173525, 204226, 239943, 281589, 329931, 386155, 451276, 526823, 614154, 715220, 831820, 966467]

DISTINCT_60 = [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10, 12, 15, 18, 22, 27, 32, 38, 46, 54, 64, 76, 89, 104, 122, 142, 165, 192, 222, 256, 296, 340, 390, 448, 512, 585, 668, 760, 864, 982, 1113, 1260, 1426, 1610, 1816, 2048, 2304, 2590, 2910, 3264, 3658, 4097, 4582, 5120, 5718, 6378, 7108, 7917, 8808, 9792, 10880]

CLSXY_2_1_30 = [1, 2, 2, 4, 6, 8, 12, 16, 22, 30, 40, 52, 68, 88, 112, 144, 182, 228, 286, 356, 440, 544, 668, 816, 996, 1210, 1464, 1768, 2128, 2552, 3056]

CLSXY_3_0_24 = [1, 1, 2, 4, 5, 8, 12, 17, 24, 34, 46, 62, 84, 111, 146, 192, 248, 320, 411, 522, 662, 836, 1048, 1310, 1632]

FALSE_BASE_40 = [1, -1, 1, 0, 0, -1, 0, 1, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1]

S_2_1_MINUS_S_2_0_30 = [0, 1, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 3, 4, 4, 4, 6, 7, 7, 8, 10, 12, 13, 14, 17, 21, 22, 24, 29, 33, 36]

FALSE_CLSXY_2_0_30 = [1, -1, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0]

