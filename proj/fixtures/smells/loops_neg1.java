public void scanGrid(int[][] grid) {
    for (int i = 0; i < grid.length; i++) {
        for (int j = 0; j < grid[i].length; j++) {
            visit(grid[i][j]);
        }
    }
}
