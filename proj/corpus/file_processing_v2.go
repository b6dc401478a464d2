package main

import "fmt"

func worker(file string, results chan int) {
	results <- len(file)
}

// Unbuffered results and only the first answer is read; the remaining
// workers stay blocked after main returns.
func main() {
	files := []string{"a.txt", "b.txt", "c.txt"}
	a := make(chan int)
	for i := 0; i < len(files); i++ {
		go worker(files[i], a)
	}
	first := <-a
	fmt.Println(first)
}
