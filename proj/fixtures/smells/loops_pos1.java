public void scanCube(int[][][] grid) {
    for (int i = 0; i < grid.length; i++) {
        for (int j = 0; j < grid[i].length; j++) {
            for (int k = 0; k < grid[i][j].length; k++) {
                visit(grid[i][j][k]);
            }
        }
    }
}
